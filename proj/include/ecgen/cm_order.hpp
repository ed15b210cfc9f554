#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ecgen/errors.hpp"

namespace ecgen {

// x + y*omega with omega = (D + sqrt(D))/2 the standard generator of the
// order of discriminant D.
struct OrderElement {
  int64_t x = 0;
  int64_t y = 0;

  friend bool operator==(const OrderElement&, const OrderElement&) = default;
};

// s Z + (b + c*omega) Z in normalized form: s > 0, c > 0, c | s, c | b,
// 0 <= b < s. The norm (lattice index) is s*c.
struct IdealHNF {
  int64_t s = 1;
  int64_t b = 0;
  int64_t c = 1;

  int64_t norm() const { return s * c; }
  bool is_unit() const { return s == 1 && c == 1; }

  friend bool operator==(const IdealHNF&, const IdealHNF&) = default;
};

struct PrimeIdealPower {
  IdealHNF prime;
  int exponent = 0;
};

// Order of discriminant D = u^2 D_K in the imaginary quadratic field of
// fundamental discriminant D_K. Immutable; every operation is pure.
class CMOrder {
 public:
  CMOrder(int64_t D_K, int64_t u);

  int64_t fundamental_discriminant() const { return D_K_; }
  int64_t conductor() const { return u_; }
  int64_t discriminant() const { return D_; }
  int unit_count() const { return unit_count_; }
  // omega^2 = D*omega - omega_norm(); omega_norm = D(D-1)/4.
  int64_t omega_norm() const { return omega_norm_; }

  // ---- element arithmetic ----
  OrderElement one() const { return {1, 0}; }
  OrderElement omega() const { return {0, 1}; }
  OrderElement add(OrderElement a, OrderElement b) const;
  OrderElement sub(OrderElement a, OrderElement b) const;
  OrderElement neg(OrderElement a) const { return {-a.x, -a.y}; }
  OrderElement mul(OrderElement a, OrderElement b) const;
  OrderElement conj(OrderElement a) const { return {a.x + a.y * D_, -a.y}; }
  int64_t norm(OrderElement a) const;
  int64_t trace(OrderElement a) const { return 2 * a.x + a.y * D_; }
  OrderElement pow(OrderElement a, int64_t e) const;
  bool is_unit(OrderElement a) const { return norm(a) == 1; }
  const std::vector<OrderElement>& units() const { return units_; }
  // True if a = unit * b.
  bool associated(OrderElement a, OrderElement b) const;

  // ---- ideals ----
  IdealHNF unit_ideal() const { return {1, 0, 1}; }
  IdealHNF ideal_from_generators(std::span<const OrderElement> gens) const;
  IdealHNF principal_ideal(OrderElement a) const;
  IdealHNF scalar_ideal(int64_t n) const;  // (n)
  bool ideal_is_valid(const IdealHNF& I) const;  // closure under omega
  bool contains(const IdealHNF& I, OrderElement a) const;
  bool ideal_contains(const IdealHNF& outer, const IdealHNF& inner) const;
  IdealHNF ideal_mul(const IdealHNF& A, const IdealHNF& B) const;
  IdealHNF ideal_join(const IdealHNF& A, const IdealHNF& B) const;  // A + B
  IdealHNF ideal_pow(const IdealHNF& A, int e) const;
  IdealHNF conj_ideal(const IdealHNF& A) const;
  bool coprime(const IdealHNF& A, const IdealHNF& B) const {
    return ideal_join(A, B).is_unit();
  }
  bool is_coprime_to_conductor(const IdealHNF& A) const;
  // All ideals J with I subset J and norm(J) <= bound, by HNF triple scan.
  std::vector<IdealHNF> divisors_up_to(const IdealHNF& I, int64_t bound) const;
  // All ideals of norm <= bound.
  std::vector<IdealHNF> ideals_up_to(int64_t bound) const;

  // ---- residues mod an ideal ----
  OrderElement reduce(OrderElement a, const IdealHNF& I) const;
  std::vector<OrderElement> residues(const IdealHNF& I) const;
  std::vector<OrderElement> invertible_residues(const IdealHNF& I) const;
  bool invertible_mod(OrderElement a, const IdealHNF& I) const;
  OrderElement inverse_mod(OrderElement a, const IdealHNF& I) const;
  // a^e reduced mod I at every step, so coordinates stay bounded.
  OrderElement pow_mod(OrderElement a, int64_t e, const IdealHNF& I) const;
  // Least T >= 1 with a^T = 1 mod I; NotInvertible if a is not coprime to I.
  int64_t multiplicative_order_mod(OrderElement a, const IdealHNF& I) const;

  // ---- factorization and multiplicative functions ----
  // Requires the ideal coprime to the conductor (ConductorCollision else).
  std::vector<PrimeIdealPower> factor_ideal(const IdealHNF& I) const;
  // Prime ideals above the rational prime t (t coprime to u).
  std::vector<PrimeIdealPower> primes_above(int64_t t) const;
  int64_t phi(const IdealHNF& I) const;       // phi_K
  int mobius(const IdealHNF& I) const;        // mu_K
  int prime_divisor_count(const IdealHNF& I) const;  // omega_K
  // Kronecker symbol (D | t); decides split/inert/ramified.
  static int kronecker(int64_t D, int64_t t);

  // ---- lattice point counts ----
  // #{alpha in I : 0 < norm(alpha) <= J}. Exact integer arithmetic,
  // row-wise scan over the imaginary coordinate.
  int64_t count_norm_ball(const IdealHNF& I, int64_t J, bool parallel = true) const;
  int64_t count_norm_ball_serial(const IdealHNF& I, int64_t J) const;
  // #{alpha in O : 0 < norm(alpha) <= J, (alpha) + I = O}.
  int64_t count_coprime_norm_ball(const IdealHNF& I, int64_t J) const;
  // Same count through the Moebius inclusion-exclusion over divisors of I;
  // independent path kept as a cross-check oracle.
  int64_t count_coprime_norm_ball_mobius(const IdealHNF& I, int64_t J) const;
  std::vector<OrderElement> norm_ball_elements(const IdealHNF& I, int64_t J) const;
  // Longest diagonal of the fundamental parallelogram of I (squared value
  // is exact; returned as double).
  double longest_diagonal(const IdealHNF& I) const;
  // Main term 2*pi*J / (w sqrt|D| n(I)) the ball count is compared against.
  double norm_ball_main_term(const IdealHNF& I, int64_t J) const;

  // ---- representation counts ----
  // Number of pairs (n, gamma), 1 <= n <= T, 0 < norm(gamma) <= J, with
  // tau^n = rho*gamma mod I. T is the multiplicative order of tau mod I.
  int64_t count_representations(OrderElement tau, OrderElement rho,
                                const IdealHNF& I, int64_t J) const;
  // Left side: sum of count_representations over all invertible residues
  // rho. Right side: T * #{gamma : 0 < n(gamma) <= J, (gamma)+I = O}.
  std::pair<int64_t, int64_t> representation_partition(OrderElement tau,
                                                       const IdealHNF& I,
                                                       int64_t J) const;

 private:
  int64_t D_K_;
  int64_t u_;
  int64_t D_;
  int64_t omega_norm_;
  int unit_count_;
  std::vector<OrderElement> units_;

  IdealHNF normalize_triple(int64_t s, int64_t b, int64_t c) const;
};

// #{1 <= a <= J : gcd(a, ell) = 1} by sieve; the rational-integer
// counterpart of the coprime ball count, kept for test parity.
int64_t count_coprime_integers(int64_t J, int64_t ell);

int64_t isqrt_i64(int64_t n);
std::vector<std::pair<int64_t, int>> factor_integer(int64_t n);
int64_t euler_phi_i64(int64_t n);

}  // namespace ecgen
