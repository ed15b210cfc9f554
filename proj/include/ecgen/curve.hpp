#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ecgen/field.hpp"

namespace ecgen {

class Curve;
class Extension;

// Affine point or infinity on a fixed curve over a fixed extension field.
// The tag ties it to the (curve, extension) pair that created it; group
// operations reject mismatched tags.
struct Point {
  bool inf = true;
  Fe x{};
  Fe y{};
  uint64_t tag = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct TorsionShape {
  int64_t d1 = 1;
  int64_t d2 = 1;  // d1 | d2

  friend bool operator==(const TorsionShape&, const TorsionShape&) = default;
};

// Enumeration ceiling for q^m in the brute-force kernels.
inline constexpr int64_t kEnumBudget = 10'000'000;

// Nonsingular ordinary Weierstrass curve
//   y^2 + (a1 x + a3) y = x^3 + a2 x^2 + a4 x + a6
// over F_q. The base-field cardinality, trace and the decomposition
// t^2 - 4q = v^2 D_K are computed eagerly at construction. Supersingular
// input (p | t) is rejected with SupersingularCurve.
class Curve {
 public:
  Curve(FieldSpec F, Fe a1, Fe a2, Fe a3, Fe a4, Fe a6);

  Curve(const Curve&) = delete;
  Curve& operator=(const Curve&) = delete;
  Curve(Curve&&) = default;

  const FieldSpec& field() const { return F_; }
  const Fe& a1() const { return a1_; }
  const Fe& a2() const { return a2_; }
  const Fe& a3() const { return a3_; }
  const Fe& a4() const { return a4_; }
  const Fe& a6() const { return a6_; }

  int64_t n_points() const { return n_points_; }
  int64_t trace() const { return trace_; }
  int64_t v() const { return v_; }
  int64_t D_K() const { return D_K_; }
  int64_t frobenius_discriminant() const { return trace_ * trace_ - 4 * F_.q(); }

  // Trace of the q^m-power Frobenius via the Weil recurrence
  // t_m = t * t_{m-1} - q * t_{m-2}.
  int64_t weil_trace(int m) const;
  // #E(F_{q^m}) = q^m + 1 - t_m, without enumeration.
  int64_t weil_count(int m) const;

  // Base change to F_{q^m}; built once per degree and cached.
  const Extension& over(int m) const;

  uint64_t id() const { return id_; }

 private:
  FieldSpec F_;
  Fe a1_, a2_, a3_, a4_, a6_;
  int64_t n_points_ = 0;
  int64_t trace_ = 0;
  int64_t v_ = 1;
  int64_t D_K_ = 0;
  uint64_t id_ = 0;
  mutable std::unique_ptr<std::mutex> ext_mutex_ = std::make_unique<std::mutex>();
  mutable std::map<int, std::unique_ptr<Extension>> extensions_;
};

// A curve base-changed to F_{q^m}, realized as F_p^{k m} with a fresh
// deterministic modulus and the base field embedded by root-finding.
// Immutable; safe for read-only sharing.
class Extension {
 public:
  Extension(const Curve& E, int m);

  const Curve& curve() const { return *E_; }
  int m() const { return m_; }
  const FieldSpec& field() const { return F_; }
  int64_t n_points() const { return n_points_; }
  uint64_t tag() const { return tag_; }

  Fe embed(const Fe& base_element) const;

  Point infinity() const { return Point{true, {}, {}, tag_}; }
  // Validates the equation; DomainMismatch if (x, y) is not on the curve.
  Point make(const Fe& x, const Fe& y) const;
  bool on_curve(const Fe& x, const Fe& y) const;

  Point neg(const Point& P) const;
  Point add(const Point& P, const Point& Q) const;
  Point sub(const Point& P, const Point& Q) const { return add(P, neg(Q)); }
  Point scalar_mul(int64_t n, const Point& P) const;
  // q-power Frobenius (x, y) -> (x^q, y^q), a precomputed linear map.
  Point frobenius(const Point& P) const;

  int64_t point_order(const Point& P) const;

  // Exact #E(F_{q^m}) by iterating all x and solving the quadratic in y.
  // ScaleLimit if q^m exceeds the enumeration budget.
  int64_t count_points(bool parallel = true) const;
  int64_t count_points_serial() const { return count_points(false); }

  // Deterministic enumeration: x by ascending index, then y by ascending
  // index, infinity last.
  void for_each_point(const std::function<void(const Point&)>& fn) const;
  // Stops as soon as fn returns true; returns whether it did.
  bool for_each_point_until(const std::function<bool(const Point&)>& fn) const;
  std::vector<Point> points() const;

  // Points killed by a, by exhaustive scan.
  std::vector<Point> torsion_points(int64_t a, bool parallel = true) const;
  std::vector<Point> torsion_points_serial(int64_t a) const {
    return torsion_points(a, false);
  }

  int64_t key(const Point& P) const;  // injective into [-1, q^m * q^m)

  void check_tag(const Point& P) const;

 private:
  const Curve* E_;
  int m_;
  FieldSpec F_;
  Fe gen_image_;  // image of the base-field generator
  Fe a1_, a2_, a3_, a4_, a6_;
  std::vector<std::array<uint32_t, kMaxFieldDegree>> embed_cols_;
  std::vector<std::array<uint32_t, kMaxFieldDegree>> frobq_cols_;
  int64_t n_points_ = 0;
  uint64_t tag_ = 0;

  friend class YSolver;
};

// (d1, d2) shape of the a-torsion subgroup of E(F_{q^m}), by scan.
TorsionShape rational_torsion(const Curve& E, int64_t a, int m,
                              bool parallel = true);

// Structure (d1, d2) of the full rational point group E(F_{q^m}).
TorsionShape group_structure(const Extension& X);

}  // namespace ecgen
