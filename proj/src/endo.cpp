#include "ecgen/endo.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace ecgen {

Rational Rational::of(int64_t n, int64_t d) {
  if (d == 0) throw InvalidConfiguration("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  int64_t g = std::gcd(std::abs(n), d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return {n, d};
}

EndRing::EndRing(const Curve& E, int64_t conductor, bool certified)
    : E_(&E), O_(E.D_K(), conductor), certified_(certified) {
  if (E.v() % conductor != 0)
    throw InvalidConfiguration("end ring: conductor must divide v");
  v_rel_ = E.v() / conductor;
  // pi = (t - v_rel * D_E)/2 + v_rel * omega; the parity always matches.
  int64_t num = E.trace() - v_rel_ * O_.discriminant();
  if (num % 2 != 0) throw Error("end ring: pi coordinate not integral");
  pi_c0_ = num / 2;
  if (O_.norm(pi()) != E.field().q() || O_.trace(pi()) != E.trace())
    throw Error("end ring: pi fails its characteristic data");
}

void EndRing::require_certified() const {
  if (!certified_)
    throw ScaleLimit("end ring uncertified: operation needs the exact ring");
}

IdealHNF EndRing::inseparable_prime() const {
  OrderElement gens[2] = {{E_->field().p(), 0}, pi()};
  IdealHNF P = O_.ideal_from_generators(gens);
  if (P.norm() != E_->field().p()) throw Error("inseparable prime: wrong norm");
  return P;
}

Endomorphism EndRing::make(Rational x, Rational y) const {
  require_certified();
  Endomorphism t{Rational::of(x.num, x.den), Rational::of(y.num, y.den)};
  to_order_element(t);  // certifies membership
  return t;
}

OrderElement EndRing::to_order_element(const Endomorphism& t) const {
  // x + y*pi = (x + y*pi_c0) + (y*v_rel) * omega
  int64_t a_num = t.x.num * t.y.den + t.y.num * pi_c0_ * t.x.den;
  int64_t a_den = t.x.den * t.y.den;
  if (a_num % a_den != 0)
    throw InvalidConfiguration("endomorphism: not a member of End(E)");
  int64_t b_num = t.y.num * v_rel_;
  if (b_num % t.y.den != 0)
    throw InvalidConfiguration("endomorphism: not a member of End(E)");
  return {a_num / a_den, b_num / t.y.den};
}

Endomorphism EndRing::from_order_element(OrderElement a) const {
  // a.x + a.y*omega = (a.x - a.y*pi_c0/v_rel) + (a.y/v_rel)*pi
  return {Rational::of(a.x * v_rel_ - a.y * pi_c0_, v_rel_),
          Rational::of(a.y, v_rel_)};
}

int64_t EndRing::denominator(const Endomorphism& t) const {
  return std::lcm(t.x.den, t.y.den);
}

int64_t EndRing::endo_norm(const Endomorphism& t) const {
  return O_.norm(to_order_element(t));
}

bool EndRing::coprime_to_conductor(const Endomorphism& t) const {
  if (O_.conductor() == 1) return true;
  OrderElement a = to_order_element(t);
  OrderElement gens[2] = {a, {O_.conductor(), 0}};
  return O_.ideal_from_generators(gens).is_unit();
}

Point EndRing::apply(const Endomorphism& t, const Point& P,
                     const Extension& X) const {
  require_certified();
  X.check_tag(P);
  if (P.inf) return P;
  int64_t d = denominator(t);
  int64_t xi = t.x.num * (d / t.x.den);
  int64_t yi = t.y.num * (d / t.y.den);
  if (d > 1) {
    // lift modulo the point order; only fractional maps need it
    int64_t ell = X.point_order(P);
    if (std::gcd(d, ell) != 1)
      throw DenominatorCollision(
          "apply: denominator shares a factor with the point order");
    int64_t e = mod_inverse(d % ell, ell);
    xi = ((xi % ell) * e % ell + ell) % ell;
    yi = ((yi % ell) * e % ell + ell) % ell;
  }
  Point A = X.scalar_mul(xi, P);
  Point B = X.scalar_mul(yi, X.frobenius(P));
  return X.add(A, B);
}

Point EndRing::apply_via_division(const Endomorphism& t, const Point& P,
                                  int64_t budget) const {
  require_certified();
  const Extension& X1 = E_->over(1);
  X1.check_tag(P);
  if (P.inf) return P;
  int64_t ell = X1.point_order(P);
  int64_t d = denominator(t);
  if (std::gcd(d, ell) == 1) return apply(t, P, X1);

  int64_t xi = t.x.num * (d / t.x.den);
  int64_t yi = t.y.num * (d / t.y.den);
  // Find R with d R = P over an extension. d*t is integral and kills E[d],
  // so the value x i R + yi pi(R) does not depend on the choice of R.
  for (int m = 1;; ++m) {
    int64_t qm = 1;
    bool over_budget = false;
    for (int i = 0; i < m; ++i) {
      qm *= E_->field().q();
      if (qm > budget) {
        over_budget = true;
        break;
      }
    }
    if (over_budget || E_->field().k() * m > kMaxFieldDegree)
      throw ScaleLimit("apply_via_division: no division point within budget");
    const Extension& Xm = E_->over(m);
    Point target = Xm.make(Xm.embed(P.x), Xm.embed(P.y));
    Point found = Xm.infinity();
    bool have = Xm.for_each_point_until([&](const Point& R) {
      if (R.inf || !(Xm.scalar_mul(d, R) == target)) return false;
      found = R;
      return true;
    });
    if (!have) continue;
    Point val = Xm.add(Xm.scalar_mul(xi, found),
                       Xm.scalar_mul(yi, Xm.frobenius(found)));
    if (val.inf) return X1.infinity();
    // map the (necessarily rational) value back to the base field
    Point out = X1.infinity();
    bool matched = X1.for_each_point_until([&](const Point& S) {
      if (S.inf || !(Xm.embed(S.x) == val.x && Xm.embed(S.y) == val.y))
        return false;
      out = S;
      return true;
    });
    if (!matched) throw Error("apply_via_division: value not rational");
    return out;
  }
}

Point EndRing::omega_action(const Point& P, int64_t budget) const {
  Endomorphism om = from_order_element(O_.omega());
  const Extension& X1 = E_->over(1);
  if (P.inf) return P;
  int64_t ell = X1.point_order(P);
  if (std::gcd(denominator(om), ell) == 1) return apply(om, P, X1);
  return apply_via_division(om, P, budget);
}

AnnihilatorIdeal EndRing::annihilator(const Point& P) const {
  require_certified();
  const Extension& X1 = E_->over(1);
  X1.check_tag(P);
  if (P.inf) throw InvalidConfiguration("annihilator: point at infinity");
  int64_t ell = X1.point_order(P);
  Point W0 = omega_action(P);

  // table a -> aP
  std::unordered_map<int64_t, int64_t> index_of;  // key(aP) -> a
  Point aP = X1.infinity();
  for (int64_t a = 0; a < ell; ++a) {
    index_of.emplace(X1.key(aP), a);
    aP = X1.add(aP, P);
  }
  std::vector<OrderElement> gens;
  gens.push_back({ell, 0});
  gens.push_back({0, ell});
  Point bW = X1.infinity();
  for (int64_t b = 0; b < ell; ++b) {
    auto it = index_of.find(X1.key(X1.neg(bW)));
    if (it != index_of.end()) gens.push_back({it->second, b});
    bW = X1.add(bW, W0);
  }
  IdealHNF ideal = O_.ideal_from_generators(gens);
  if (ideal.s != ell) throw Error("annihilator: least integer mismatch");
  int64_t n = ideal.norm();
  if (ell * ell < n || n < ell) throw Error("annihilator: norm out of range");
  OrderElement pi_minus_1 = O_.sub(pi(), O_.one());
  if (!O_.contains(ideal, pi_minus_1))
    throw Error("annihilator: pi - 1 must annihilate a rational point");
  return {ideal, ell, P};
}

IdealHNF EndRing::annihilator_over(const Point& P, const Extension& X) const {
  require_certified();
  X.check_tag(P);
  if (P.inf) throw InvalidConfiguration("annihilator: point at infinity");
  int64_t ord = X.point_order(P);
  Endomorphism om = from_order_element(O_.omega());
  if (std::gcd(denominator(om), ord) != 1)
    throw DenominatorCollision("annihilator_over: omega not liftable");
  Point W0 = apply(om, P, X);
  std::unordered_map<int64_t, int64_t> index_of;
  Point aP = X.infinity();
  for (int64_t a = 0; a < ord; ++a) {
    index_of.emplace(X.key(aP), a);
    aP = X.add(aP, P);
  }
  std::vector<OrderElement> gens;
  gens.push_back({ord, 0});
  gens.push_back({0, ord});
  Point bW = X.infinity();
  for (int64_t b = 0; b < ord; ++b) {
    auto it = index_of.find(X.key(X.neg(bW)));
    if (it != index_of.end()) gens.push_back({it->second, b});
    bW = X.add(bW, W0);
  }
  return O_.ideal_from_generators(gens);
}

int64_t EndRing::multiplicative_order(const Endomorphism& tau,
                                      const AnnihilatorIdeal& ann) const {
  OrderElement t = to_order_element(tau);
  int64_t T = O_.multiplicative_order_mod(t, ann.ideal);
  if (T > ann.ideal.norm() - 1) throw Error("multiplicative_order: T bound");
  return T;
}

int64_t EndRing::multiplicative_order_points(const Endomorphism& tau,
                                             const AnnihilatorIdeal& ann) const {
  require_certified();
  const Extension& X1 = E_->over(1);
  const Point& P = ann.point;
  int64_t ell = ann.ell;
  int64_t d = denominator(tau);
  int64_t limit = ann.ideal.norm() + 1;
  if (std::gcd(d, ell) == 1) {
    Point cur = P;
    for (int64_t T = 1; T <= limit; ++T) {
      cur = apply(tau, cur, X1);
      if (cur == P) return T;
      if (cur.inf) throw NotInvertible("order_points: orbit hit infinity");
    }
    throw Error("order_points: did not return to the start");
  }
  // Track the orbit as A*P + B*W0 with the points materialized through the
  // group law each step; omega(W0) = D*W0 - n(omega)*P closes the module.
  Point W0 = omega_action(P);
  OrderElement tw = to_order_element(tau);
  int64_t tx = ((tw.x % ell) + ell) % ell;
  int64_t ty = ((tw.y % ell) + ell) % ell;
  int64_t dd = ((O_.discriminant() % ell) + ell) % ell;
  int64_t wn = ((O_.omega_norm() % ell) + ell) % ell;
  int64_t aa = 1 % ell, bb = 0;
  for (int64_t T = 1; T <= limit; ++T) {
    int64_t na = ((aa * tx - bb * ty % ell * wn) % ell + ell) % ell;
    int64_t nb = ((aa * ty + bb * tx + bb * ty % ell * dd) % ell + ell) % ell;
    aa = na;
    bb = nb;
    Point cur = X1.add(X1.scalar_mul(aa, P), X1.scalar_mul(bb, W0));
    if (cur == P) return T;
  }
  throw Error("order_points: did not return to the start");
}

std::vector<Point> EndRing::endomorphism_orbit(const Point& P) const {
  require_certified();
  const Extension& X1 = E_->over(1);
  X1.check_tag(P);
  if (P.inf) return {P};
  int64_t ell = X1.point_order(P);
  Point W0 = omega_action(P);
  std::vector<Point> out;
  std::unordered_map<int64_t, bool> seen;
  Point aP = X1.infinity();
  for (int64_t a = 0; a < ell; ++a) {
    Point cur = aP;
    for (int64_t b = 0; b < ell; ++b) {
      if (seen.emplace(X1.key(cur), true).second) out.push_back(cur);
      cur = X1.add(cur, W0);
    }
    aP = X1.add(aP, P);
  }
  std::sort(out.begin(), out.end(), [&](const Point& A, const Point& B) {
    return X1.key(A) < X1.key(B);
  });
  if (ell * ell % static_cast<int64_t>(out.size()) != 0)
    throw Error("endomorphism orbit: size must divide ell^2");
  return out;
}

EndRing determine_end_ring(const Curve& E, int64_t budget) {
  int64_t v = E.v();
  if (v == 1) return EndRing(E, 1, true);
  int64_t u = v;
  bool certified = true;
  for (auto [s, e_max] : factor_integer(v)) {
    int e_cert = 0;
    for (int e = 1; e <= e_max; ++e) {
      int64_t se = 1;
      for (int i = 0; i < e; ++i) se *= s;
      // locate the extension carrying the full s^e-torsion
      int found_m = -1;
      std::vector<Point> tors;
      for (int m = 1; E.field().k() * m <= kMaxFieldDegree; ++m) {
        int64_t qm = 1;
        bool over = false;
        for (int i = 0; i < m; ++i) {
          qm *= E.field().q();
          if (qm > budget) {
            over = true;
            break;
          }
        }
        if (over) break;
        if (E.weil_count(m) % (se * se) != 0) continue;
        if ((qm - 1) % se != 0) continue;  // Weil pairing needs mu_{s^e}
        auto pts = E.over(m).torsion_points(se);
        if (static_cast<int64_t>(pts.size()) == se * se) {
          found_m = m;
          tors = std::move(pts);
          break;
        }
      }
      if (found_m < 0) {
        certified = false;  // undecided at this level
        break;
      }
      const Extension& X = E.over(found_m);
      bool scalar = false;
      for (int64_t a = 0; a < se && !scalar; ++a) {
        bool all = true;
        for (const auto& Q : tors) {
          if (!(X.frobenius(Q) == X.scalar_mul(a, Q))) {
            all = false;
            break;
          }
        }
        scalar = all;
      }
      if (!scalar) break;  // definitive: no further descent at s
      e_cert = e;
    }
    for (int i = 0; i < e_cert; ++i) u /= s;
    if (!certified) break;
  }
  return EndRing(E, u, certified);
}

}  // namespace ecgen
