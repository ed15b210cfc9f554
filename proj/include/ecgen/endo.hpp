#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ecgen/cm_order.hpp"
#include "ecgen/curve.hpp"

namespace ecgen {

struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  static Rational of(int64_t n, int64_t d = 1);
  bool integral() const { return den == 1; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// x + y*pi with rational x, y; membership in End(E) is certified when the
// endomorphism is created through an EndRing.
struct Endomorphism {
  Rational x;
  Rational y;

  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;
};

struct AnnihilatorIdeal {
  IdealHNF ideal;      // in the (1, omega) basis of End(E)
  int64_t ell = 1;     // least positive integer member = order of the point
  Point point;
};

// End(E) as an order of conductor u in Q(sqrt(D_K)), together with the
// expression of pi in the (1, omega) basis. Produced by
// determine_end_ring; immutable afterwards.
class EndRing {
 public:
  EndRing(const Curve& E, int64_t conductor, bool certified);

  const Curve& curve() const { return *E_; }
  const CMOrder& order() const { return O_; }
  bool certified() const { return certified_; }
  int64_t conductor() const { return O_.conductor(); }
  int64_t discriminant() const { return O_.discriminant(); }
  // Index of Z[pi] in End(E); also the denominator of omega over (1, pi).
  int64_t relative_conductor() const { return v_rel_; }
  // pi = pi_c0 + v_rel * omega as an order element.
  OrderElement pi() const { return {pi_c0_, v_rel_}; }
  // The prime of non-separable endomorphisms, (p, pi).
  IdealHNF inseparable_prime() const;

  // Construction certifies x + y*pi in End(E) (integral omega-coordinates).
  Endomorphism make(Rational x, Rational y) const;
  Endomorphism scalar(int64_t e) const { return {Rational::of(e), Rational::of(0)}; }
  Endomorphism frobenius_endo() const { return {Rational::of(0), Rational::of(1)}; }
  Endomorphism from_order_element(OrderElement a) const;
  OrderElement to_order_element(const Endomorphism& t) const;
  int64_t denominator(const Endomorphism& t) const;
  int64_t endo_norm(const Endomorphism& t) const;
  bool coprime_to_conductor(const Endomorphism& t) const;

  // Action on a point of any base change of the curve. Fractional
  // denominators are lifted modulo the point order; DenominatorCollision
  // if the denominator shares a factor with it.
  Point apply(const Endomorphism& t, const Point& P, const Extension& X) const;
  // Same action evaluated through a division point d*R = P found over an
  // extension; covers denominators not invertible modulo the point order.
  // Rational points only; ScaleLimit when the search exceeds the budget.
  Point apply_via_division(const Endomorphism& t, const Point& P,
                           int64_t budget = 1'000'000) const;
  // omega(P) for rational P, choosing whichever evaluation path applies.
  Point omega_action(const Point& P, int64_t budget = 1'000'000) const;

  // Full annihilator {alpha in End(E) : alpha P = infinity} of a rational
  // point, as an O-ideal in HNF.
  AnnihilatorIdeal annihilator(const Point& P) const;
  // Annihilator of a point over an arbitrary base change, by direct scan
  // of (a + b omega) over [0, ord)^2. Requires gcd(v_rel, ord(P)) = 1.
  IdealHNF annihilator_over(const Point& P, const Extension& X) const;

  // Multiplicative order of tau modulo the annihilator: residue iteration
  // in O/l. NotInvertible when tau is not coprime to l.
  int64_t multiplicative_order(const Endomorphism& tau,
                               const AnnihilatorIdeal& ann) const;
  // The same order recovered by iterating points: least T with
  // tau^T P = P. Kept as an independent cross-check.
  int64_t multiplicative_order_points(const Endomorphism& tau,
                                      const AnnihilatorIdeal& ann) const;

  // The module orbit H = {alpha P : alpha in End(E)}, a subgroup of E(F_q).
  std::vector<Point> endomorphism_orbit(const Point& P) const;

 private:
  const Curve* E_;
  CMOrder O_;
  bool certified_;
  int64_t v_rel_ = 1;
  int64_t pi_c0_ = 0;

  void require_certified() const;
};

// Desk-scale conductor determination: for each prime power s^e | v, the
// candidate (pi - a)/s^e lies in End(E) iff pi acts as the scalar a on the
// full s^e-torsion, located over an extension within the enumeration
// budget. If some test cannot be decided within budget the ring is
// returned with certified() == false and the conductor bounds the true one
// from above.
EndRing determine_end_ring(const Curve& E, int64_t budget = kEnumBudget);

}  // namespace ecgen
