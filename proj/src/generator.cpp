#include "ecgen/generator.hpp"

#include <numeric>

namespace ecgen {

Observable Observable::monomial(int i, int j) {
  Observable f{i, j};
  if (j < 0 || j > 1 || i < 0 || (i == 0 && j == 0))
    throw InvalidConfiguration("observable: want x^i y^j, j <= 1, not constant");
  return f;
}

Observable Observable::parse(const std::string& text) {
  if (text == "x") return X();
  if (text == "y") return Y();
  // "mono:i,j"
  if (text.rfind("mono:", 0) == 0) {
    auto rest = text.substr(5);
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw InvalidConfiguration("observable: expected mono:i,j");
    return monomial(std::stoi(rest.substr(0, comma)),
                    std::stoi(rest.substr(comma + 1)));
  }
  throw InvalidConfiguration("observable: unknown spec '" + text + "'");
}

std::string Observable::name() const {
  if (i == 1 && j == 0) return "x";
  if (i == 0 && j == 1) return "y";
  return "mono:" + std::to_string(i) + "," + std::to_string(j);
}

Fe Observable::eval(const FieldSpec& F, const Point& P) const {
  if (P.inf) throw InvalidConfiguration("observable: pole at infinity");
  Fe v = F.pow(P.x, i);
  if (j == 1) v = F.mul(v, P.y);
  return v;
}

Generator::Generator(const EndRing& ring, Endomorphism tau, Point P)
    : ring_(&ring), tau_(tau), P0_(P) {
  const Extension& X1 = ring.curve().over(1);
  X1.check_tag(P);
  if (P.inf) throw InvalidConfiguration("generator: initial point at infinity");
  ann_ = ring.annihilator(P);
  W0_ = ring.omega_action(P);
  tau_w_ = ring.to_order_element(tau);
  lift_ok_ = std::gcd(ring.denominator(tau), ann_.ell) == 1;
  periodic_ = ring.order().invertible_mod(tau_w_, ann_.ideal);
  if (periodic_) T_ = ring.multiplicative_order(tau, ann_);
  cur_ = P0_;
}

Point Generator::materialize(OrderElement coords) const {
  const Extension& X1 = ring_->curve().over(1);
  return X1.add(X1.scalar_mul(coords.x, P0_), X1.scalar_mul(coords.y, W0_));
}

Point Generator::next() {
  const Extension& X1 = ring_->curve().over(1);
  ++n_;
  if (cur_.inf) return cur_;  // absorbing once the orbit degenerates
  if (lift_ok_) {
    cur_ = ring_->apply(tau_, cur_, X1);
  } else {
    cur_ = materialize(ring_->order().pow_mod(tau_w_, n_, ann_.ideal));
  }
  return cur_;
}

Point Generator::point_at(int64_t n) const {
  return materialize(ring_->order().pow_mod(tau_w_, n, ann_.ideal));
}

Sequence Generator::emit(const Observable& f, int64_t count) {
  if (count < 1) throw InvalidConfiguration("emit: count must be >= 1");
  const FieldSpec& F = ring_->curve().field();
  Sequence seq;
  seq.field = &F;
  seq.s.reserve(static_cast<size_t>(count));
  for (int64_t t = 0; t < count; ++t) {
    Point P = next();
    if (P.inf)
      seq.s.push_back({true, {}});
    else
      seq.s.push_back({false, f.eval(F, P)});
  }
  return seq;
}

}  // namespace ecgen
