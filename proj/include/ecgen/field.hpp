#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ecgen/errors.hpp"

namespace ecgen {

// Hard cap on the degree of any field over F_p built by this library,
// including extension towers flattened to F_p. Keeps elements POD.
inline constexpr int kMaxFieldDegree = 24;

// Element of F_{p^k} in the power basis (1, X, ..., X^{k-1}), constant
// coordinate first. Coordinates at positions >= k stay zero, so equality
// needs no field context.
struct Fe {
  std::array<uint32_t, kMaxFieldDegree> c{};

  friend bool operator==(const Fe& a, const Fe& b) = default;
};

// F_{p^k} with a fixed monic irreducible modulus. Immutable after
// construction; all element operations are pure, so a FieldSpec may be
// shared freely across threads.
class FieldSpec {
 public:
  // modulus holds c_0..c_{k-1} of the monic modulus X^k + c_{k-1}X^{k-1}
  // + ... + c_0, constant term first. Throws InvalidConfiguration if p is
  // not prime or the modulus is reducible.
  FieldSpec(int64_t p, int k, std::vector<int64_t> modulus);

  static FieldSpec with_default_modulus(int64_t p, int k);
  // First irreducible monic polynomial in the deterministic enumeration
  // order (constant coordinate varies slowest).
  static std::vector<int64_t> default_modulus(int64_t p, int k);
  static bool is_irreducible(int64_t p, const std::vector<int64_t>& modulus);

  int64_t p() const { return p_; }
  int k() const { return k_; }
  int64_t q() const { return q_; }
  const std::vector<int64_t>& modulus() const { return modulus_; }

  Fe zero() const { return Fe{}; }
  Fe one() const { return from_int(1); }
  Fe gen() const;  // the class of X
  Fe from_int(int64_t n) const;
  Fe from_coords(const std::vector<int64_t>& v) const;
  std::vector<int64_t> coords(const Fe& a) const;

  bool is_zero(const Fe& a) const;
  Fe add(const Fe& a, const Fe& b) const;
  Fe sub(const Fe& a, const Fe& b) const;
  Fe neg(const Fe& a) const;
  Fe mul(const Fe& a, const Fe& b) const;
  Fe mul_scalar(const Fe& a, int64_t s) const;
  Fe inv(const Fe& a) const;  // DivisionByZero on 0
  Fe div(const Fe& a, const Fe& b) const { return mul(a, inv(b)); }
  Fe pow(const Fe& a, int64_t e) const;  // negative e inverts first

  // a -> a^p as a precomputed F_p-linear map.
  Fe frobenius_p(const Fe& a) const;
  // Tr(a) = a + a^p + ... + a^{p^{k-1}}, as a residue mod p.
  uint32_t abs_trace(const Fe& a) const;

  // psi_j(a) = exp(2 pi i j Tr(a) / p). j = 0 mod p is the trivial
  // character and is rejected so callers branch on it explicitly.
  std::complex<double> additive_character(const Fe& a, int64_t j) const;

  // Bijection onto [0, q): sum of c_i p^i. Used for hashing and for
  // deterministic element enumeration.
  int64_t index(const Fe& a) const;
  Fe from_index(int64_t idx) const;

  bool same_field(const FieldSpec& o) const {
    return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
  }

 private:
  int64_t p_ = 0;
  int k_ = 0;
  int64_t q_ = 0;
  std::vector<int64_t> modulus_;
  // X^{k+i} mod f for i = 0..k-2, used by mul.
  std::vector<std::array<uint32_t, kMaxFieldDegree>> red_;
  // Columns of the p-power Frobenius: (X^i)^p.
  std::vector<std::array<uint32_t, kMaxFieldDegree>> frob_cols_;
  // Tr(X^i) mod p; the trace is F_p-linear.
  std::array<uint32_t, kMaxFieldDegree> trace_form_{};
};

bool is_prime_i64(int64_t n);
int64_t mod_inverse(int64_t a, int64_t m);  // NotInvertible if gcd != 1
int64_t pow_mod(int64_t base, int64_t exp, int64_t mod);

}  // namespace ecgen
