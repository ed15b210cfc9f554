#include "ecgen/cm_order.hpp"

#include "ecgen/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace ecgen {

namespace {

using i128 = __int128;

int64_t checked_i64(i128 v, const char* what) {
  if (v > (i128{1} << 62) || v < -(i128{1} << 62)) throw ScaleLimit(what);
  return static_cast<int64_t>(v);
}

int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

int64_t mod_floor(int64_t a, int64_t b) { return a - floor_div(a, b) * b; }

int64_t gcd_ext(int64_t a, int64_t b, int64_t& x, int64_t& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return std::abs(a);
  }
  int64_t x1, y1;
  int64_t g = gcd_ext(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace

int64_t isqrt_i64(int64_t n) {
  if (n < 0) return -1;
  auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::pair<int64_t, int>> factor_integer(int64_t n) {
  std::vector<std::pair<int64_t, int>> out;
  if (n < 0) n = -n;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.emplace_back(d, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int64_t euler_phi_i64(int64_t n) {
  int64_t r = n;
  for (auto [pp, e] : factor_integer(n)) r = r / pp * (pp - 1);
  return r;
}

int64_t count_coprime_integers(int64_t J, int64_t ell) {
  // Inclusion-exclusion over the prime divisors of ell.
  auto fac = factor_integer(ell);
  std::vector<int64_t> primes;
  for (auto [pp, e] : fac) primes.push_back(pp);
  int64_t total = 0;
  size_t subsets = size_t{1} << primes.size();
  for (size_t mask = 0; mask < subsets; ++mask) {
    int64_t d = 1;
    int sign = 1;
    for (size_t i = 0; i < primes.size(); ++i) {
      if (mask & (size_t{1} << i)) {
        d *= primes[i];
        sign = -sign;
      }
    }
    total += sign * (J / d);
  }
  return total;
}

CMOrder::CMOrder(int64_t D_K, int64_t u) : D_K_(D_K), u_(u) {
  if (D_K >= 0) throw InvalidConfiguration("order: D_K must be negative");
  int64_t m4 = mod_floor(D_K, 4);
  if (m4 != 0 && m4 != 1)
    throw InvalidConfiguration("order: D_K not a discriminant");
  // Fundamental: odd part squarefree; if even, D_K/4 squarefree and = 2,3 mod 4.
  if (m4 == 1) {
    for (auto [pp, e] : factor_integer(-D_K))
      if (e >= 2) throw InvalidConfiguration("order: D_K not fundamental");
  } else {
    int64_t d0 = D_K / 4;
    for (auto [pp, e] : factor_integer(-d0))
      if (e >= 2) throw InvalidConfiguration("order: D_K not fundamental");
    int64_t r = mod_floor(d0, 4);
    if (r == 1) throw InvalidConfiguration("order: D_K not fundamental");
  }
  if (u < 1) throw InvalidConfiguration("order: conductor must be >= 1");
  D_ = checked_i64(i128{u} * u * D_K, "order: discriminant overflow");
  omega_norm_ = checked_i64(i128{D_} * (D_ - 1) / 4, "order: omega norm overflow");

  for (int64_t y = -1; y <= 1; ++y)
    for (int64_t x = -3; x <= 3; ++x)
      if ((x != 0 || y != 0) && norm({x, y}) == 1) units_.push_back({x, y});
  unit_count_ = static_cast<int>(units_.size());
}

OrderElement CMOrder::add(OrderElement a, OrderElement b) const {
  return {a.x + b.x, a.y + b.y};
}

OrderElement CMOrder::sub(OrderElement a, OrderElement b) const {
  return {a.x - b.x, a.y - b.y};
}

OrderElement CMOrder::mul(OrderElement a, OrderElement b) const {
  i128 x = i128{a.x} * b.x - i128{a.y} * b.y * omega_norm_;
  i128 y = i128{a.x} * b.y + i128{a.y} * b.x + i128{a.y} * b.y * D_;
  return {checked_i64(x, "order: mul overflow"), checked_i64(y, "order: mul overflow")};
}

int64_t CMOrder::norm(OrderElement a) const {
  i128 n = i128{a.x} * a.x + i128{a.x} * a.y * D_ + i128{a.y} * a.y * omega_norm_;
  return checked_i64(n, "order: norm overflow");
}

OrderElement CMOrder::pow(OrderElement a, int64_t e) const {
  OrderElement r = one(), base = a;
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

bool CMOrder::associated(OrderElement a, OrderElement b) const {
  for (const auto& un : units_)
    if (mul(un, b) == a) return true;
  return false;
}

IdealHNF CMOrder::normalize_triple(int64_t s, int64_t b, int64_t c) const {
  s = std::abs(s);
  c = std::abs(c);
  if (s == 0 || c == 0) throw InvalidConfiguration("ideal: degenerate lattice");
  b = mod_floor(b, s);
  return {s, b, c};
}

IdealHNF CMOrder::ideal_from_generators(std::span<const OrderElement> gens) const {
  // Z-lattice spanned by the generators and their omega-multiples.
  std::vector<OrderElement> vecs;
  for (const auto& g : gens) {
    vecs.push_back(g);
    vecs.push_back(mul(g, omega()));
  }
  std::vector<int64_t> xs;  // vectors already reduced to y = 0
  int64_t vx = 0, vy = 0;   // running generator with minimal positive y
  for (const auto& w : vecs) {
    int64_t vwx = w.x, vwy = w.y;
    if (vwy == 0) {
      if (vwx != 0) xs.push_back(std::abs(vwx));
      continue;
    }
    if (vy == 0) {
      vx = vwx;
      vy = vwy;
      continue;
    }
    int64_t a, bb;
    int64_t g = gcd_ext(vy, vwy, a, bb);
    // the combination with y = g, plus the complementary x-only vector
    i128 nx = i128{a} * vx + i128{bb} * vwx;
    i128 rx = i128{vwy / g} * vx - i128{vy / g} * vwx;
    vx = checked_i64(nx, "ideal: hnf overflow");
    vy = g;
    int64_t r = checked_i64(rx, "ideal: hnf overflow");
    if (r != 0) xs.push_back(std::abs(r));
  }
  if (vy == 0) throw InvalidConfiguration("ideal: generators span rank < 2");
  if (vy < 0) {
    vy = -vy;
    vx = -vx;
  }
  int64_t s = 0;
  for (int64_t x : xs) s = std::gcd(s, x);
  if (s == 0) throw InvalidConfiguration("ideal: generators span rank < 2");
  IdealHNF I = normalize_triple(s, vx, vy);
  if (!ideal_is_valid(I)) throw InvalidConfiguration("ideal: not omega-closed");
  return I;
}

IdealHNF CMOrder::principal_ideal(OrderElement a) const {
  OrderElement gens[1] = {a};
  return ideal_from_generators(gens);
}

IdealHNF CMOrder::scalar_ideal(int64_t n) const {
  n = std::abs(n);
  if (n == 0) throw InvalidConfiguration("ideal: zero ideal");
  return {n, 0, n};
}

bool CMOrder::contains(const IdealHNF& I, OrderElement a) const {
  if (a.y % I.c != 0) return false;
  int64_t t = a.y / I.c;
  i128 x = i128{a.x} - i128{t} * I.b;
  return x % I.s == 0;
}

bool CMOrder::ideal_is_valid(const IdealHNF& I) const {
  if (I.s <= 0 || I.c <= 0 || I.b < 0 || I.b >= I.s) return false;
  if (I.s % I.c != 0 || I.b % I.c != 0) return false;
  return contains(I, mul(omega(), {I.b, I.c})) &&
         contains(I, mul(omega(), {I.s, 0}));
}

bool CMOrder::ideal_contains(const IdealHNF& outer, const IdealHNF& inner) const {
  return contains(outer, {inner.s, 0}) && contains(outer, {inner.b, inner.c});
}

IdealHNF CMOrder::ideal_mul(const IdealHNF& A, const IdealHNF& B) const {
  OrderElement ga1{A.s, 0}, ga2{A.b, A.c};
  OrderElement gb1{B.s, 0}, gb2{B.b, B.c};
  OrderElement gens[4] = {mul(ga1, gb1), mul(ga1, gb2), mul(ga2, gb1),
                          mul(ga2, gb2)};
  return ideal_from_generators(gens);
}

IdealHNF CMOrder::ideal_join(const IdealHNF& A, const IdealHNF& B) const {
  OrderElement gens[4] = {{A.s, 0}, {A.b, A.c}, {B.s, 0}, {B.b, B.c}};
  return ideal_from_generators(gens);
}

IdealHNF CMOrder::ideal_pow(const IdealHNF& A, int e) const {
  IdealHNF r = unit_ideal();
  for (int i = 0; i < e; ++i) r = ideal_mul(r, A);
  return r;
}

IdealHNF CMOrder::conj_ideal(const IdealHNF& A) const {
  OrderElement gens[2] = {{A.s, 0}, conj({A.b, A.c})};
  return ideal_from_generators(gens);
}

bool CMOrder::is_coprime_to_conductor(const IdealHNF& A) const {
  return std::gcd(A.norm(), u_) == 1;
}

std::vector<IdealHNF> CMOrder::ideals_up_to(int64_t bound) const {
  std::vector<IdealHNF> out;
  for (int64_t c = 1; c * c <= bound; ++c) {
    for (int64_t s = c; s * c <= bound; s += c) {
      for (int64_t b = 0; b < s; b += c) {
        IdealHNF I{s, b, c};
        if (ideal_is_valid(I)) out.push_back(I);
      }
    }
  }
  return out;
}

std::vector<IdealHNF> CMOrder::divisors_up_to(const IdealHNF& I, int64_t bound) const {
  std::vector<IdealHNF> out;
  for (const auto& J : ideals_up_to(std::min(bound, I.norm())))
    if (ideal_contains(J, I)) out.push_back(J);
  return out;
}

OrderElement CMOrder::reduce(OrderElement a, const IdealHNF& I) const {
  int64_t t = floor_div(a.y, I.c);
  int64_t y = a.y - t * I.c;
  i128 x = i128{a.x} - i128{t} * I.b;
  int64_t xr = static_cast<int64_t>(x % I.s);
  xr = mod_floor(xr, I.s);
  return {xr, y};
}

std::vector<OrderElement> CMOrder::residues(const IdealHNF& I) const {
  std::vector<OrderElement> out;
  out.reserve(static_cast<size_t>(I.s) * I.c);
  for (int64_t y = 0; y < I.c; ++y)
    for (int64_t x = 0; x < I.s; ++x) out.push_back({x, y});
  return out;
}

bool CMOrder::invertible_mod(OrderElement a, const IdealHNF& I) const {
  if (I.is_unit()) return true;
  OrderElement r = reduce(a, I);
  if (r.x == 0 && r.y == 0) return false;
  OrderElement gens[3] = {r, {I.s, 0}, {I.b, I.c}};
  return ideal_from_generators(gens).is_unit();
}

std::vector<OrderElement> CMOrder::invertible_residues(const IdealHNF& I) const {
  std::vector<OrderElement> out;
  for (const auto& r : residues(I))
    if (invertible_mod(r, I)) out.push_back(r);
  return out;
}

OrderElement CMOrder::inverse_mod(OrderElement a, const IdealHNF& I) const {
  if (!invertible_mod(a, I)) throw NotInvertible("inverse_mod: not coprime");
  OrderElement target = reduce(one(), I);
  for (const auto& r : residues(I))
    if (reduce(mul(a, r), I) == target) return r;
  throw NotInvertible("inverse_mod: no inverse found");
}

OrderElement CMOrder::pow_mod(OrderElement a, int64_t e, const IdealHNF& I) const {
  OrderElement r = reduce(one(), I);
  OrderElement base = reduce(a, I);
  while (e > 0) {
    if (e & 1) r = reduce(mul(r, base), I);
    base = reduce(mul(base, base), I);
    e >>= 1;
  }
  return r;
}

int64_t CMOrder::multiplicative_order_mod(OrderElement a, const IdealHNF& I) const {
  if (!invertible_mod(a, I)) throw NotInvertible("multiplicative_order: not coprime");
  OrderElement target = reduce(one(), I);
  OrderElement cur = target;
  int64_t limit = I.norm() + 1;
  for (int64_t t = 1; t <= limit; ++t) {
    cur = reduce(mul(cur, a), I);
    if (cur == target) return t;
  }
  throw Error("multiplicative_order: did not terminate");
}

int CMOrder::kronecker(int64_t D, int64_t t) {
  if (t == 2) {
    if (D % 2 == 0) return 0;
    int64_t r = mod_floor(D, 8);
    return (r == 1 || r == 7) ? 1 : -1;
  }
  int64_t a = mod_floor(D, t);
  if (a == 0) return 0;
  int64_t l = ecgen::pow_mod(a, (t - 1) / 2, t);
  return l == 1 ? 1 : -1;
}

std::vector<PrimeIdealPower> CMOrder::primes_above(int64_t t) const {
  if (std::gcd(t, u_) != 1)
    throw ConductorCollision("primes_above: prime divides the conductor");
  int sym = kronecker(D_, t);
  if (sym == -1) return {{IdealHNF{t, 0, t}, 1}};  // inert, norm t^2
  // find roots of b^2 + bD + omega_norm = 0 mod t
  std::vector<int64_t> roots;
  for (int64_t b = 0; b < t; ++b) {
    i128 v = i128{b} * b + i128{b} * D_ + omega_norm_;
    if (mod_floor(static_cast<int64_t>(v % t), t) == 0) roots.push_back(b);
  }
  std::vector<PrimeIdealPower> out;
  if (sym == 0) {
    if (roots.size() != 1) throw Error("primes_above: ramified root count");
    out.push_back({IdealHNF{t, roots[0], 1}, 2});
  } else {
    if (roots.size() != 2) throw Error("primes_above: split root count");
    out.push_back({IdealHNF{t, roots[0], 1}, 1});
    out.push_back({IdealHNF{t, roots[1], 1}, 1});
  }
  for (auto& pp : out)
    if (!ideal_is_valid(pp.prime)) throw Error("primes_above: invalid HNF");
  return out;
}

std::vector<PrimeIdealPower> CMOrder::factor_ideal(const IdealHNF& I) const {
  if (!is_coprime_to_conductor(I))
    throw ConductorCollision("factor_ideal: ideal not coprime to conductor");
  std::vector<PrimeIdealPower> out;
  if (I.is_unit()) return out;
  int64_t carried = 0;
  for (auto [t, e] : factor_integer(I.norm())) {
    for (const auto& pp : primes_above(t)) {
      // valuation of I at pp by containment in powers
      int v = 0;
      IdealHNF power = pp.prime;
      while (ideal_contains(power, I)) {
        ++v;
        power = ideal_mul(power, pp.prime);
      }
      if (v > 0) out.push_back({pp.prime, v});
      int f = pp.prime.norm() == t ? 1 : 2;
      carried += static_cast<int64_t>(v) * f;
    }
  }
  // sanity: exponents must account for the full norm
  i128 check = 1;
  for (const auto& f : out)
    for (int i = 0; i < f.exponent; ++i) check *= f.prime.norm();
  if (check != I.norm()) throw Error("factor_ideal: norm mismatch");
  (void)carried;
  return out;
}

int64_t CMOrder::phi(const IdealHNF& I) const {
  int64_t r = I.norm();
  for (const auto& f : factor_ideal(I)) r = r / f.prime.norm() * (f.prime.norm() - 1);
  return r;
}

int CMOrder::mobius(const IdealHNF& I) const {
  auto fac = factor_ideal(I);
  for (const auto& f : fac)
    if (f.exponent >= 2) return 0;
  return fac.size() % 2 == 0 ? 1 : -1;
}

int CMOrder::prime_divisor_count(const IdealHNF& I) const {
  return static_cast<int>(factor_ideal(I).size());
}

namespace {

// Exact per-row interval count used by the norm-ball kernels. Row y = c*j
// of the HNF lattice; x runs over j*b + s*Z.
int64_t row_count(const IdealHNF& I, int64_t D, int64_t omega_norm, int64_t J,
                  int64_t j) {
  int64_t y = I.c * j;
  i128 yy = i128{omega_norm} * y * y;
  i128 disc = i128{D} * y * y + 4 * i128{J};
  if (disc < 0) return 0;
  auto norm_ok = [&](int64_t x) {
    i128 n = i128{x} * x + i128{D} * x * y + yy;
    return n <= J;
  };
  double root = std::sqrt(static_cast<double>(disc));
  double mid = -static_cast<double>(D) * static_cast<double>(y) / 2.0;
  auto lo = static_cast<int64_t>(std::floor(mid - root / 2)) - 2;
  auto hi = static_cast<int64_t>(std::ceil(mid + root / 2)) + 2;
  while (!norm_ok(lo) && lo < hi) ++lo;
  while (!norm_ok(hi) && hi > lo) --hi;
  if (!norm_ok(lo)) return 0;
  // integers congruent to j*b mod s inside [lo, hi]
  int64_t r = mod_floor(i128{j} * I.b % I.s, I.s);
  int64_t first = lo + mod_floor(r - lo, I.s);
  if (first > hi) return 0;
  int64_t cnt = (hi - first) / I.s + 1;
  if (j == 0 && r == 0 && lo <= 0 && 0 <= hi) --cnt;  // exclude alpha = 0
  return cnt;
}

}  // namespace

int64_t CMOrder::count_norm_ball(const IdealHNF& I, int64_t J, bool parallel) const {
  if (J < 0) return 0;
  int64_t jmax = isqrt_i64(4 * J / (-D_ * I.c * I.c));
  int64_t total = 0;
  if (parallel) {
#pragma omp parallel for reduction(+ : total) schedule(static)
    for (int64_t j = -jmax; j <= jmax; ++j)
      total += row_count(I, D_, omega_norm_, J, j);
  } else {
    for (int64_t j = -jmax; j <= jmax; ++j)
      total += row_count(I, D_, omega_norm_, J, j);
  }
  return total;
}

int64_t CMOrder::count_norm_ball_serial(const IdealHNF& I, int64_t J) const {
  return count_norm_ball(I, J, false);
}

std::vector<OrderElement> CMOrder::norm_ball_elements(const IdealHNF& I,
                                                      int64_t J) const {
  std::vector<OrderElement> out;
  if (J < 0) return out;
  int64_t jmax = isqrt_i64(4 * J / (-D_ * I.c * I.c));
  for (int64_t j = -jmax; j <= jmax; ++j) {
    int64_t y = I.c * j;
    i128 disc = i128{D_} * y * y + 4 * i128{J};
    if (disc < 0) continue;
    auto norm_of = [&](int64_t x) {
      return i128{x} * x + i128{D_} * x * y + i128{omega_norm_} * y * y;
    };
    double root = std::sqrt(static_cast<double>(disc));
    double mid = -static_cast<double>(D_) * static_cast<double>(y) / 2.0;
    auto lo = static_cast<int64_t>(std::floor(mid - root / 2)) - 2;
    auto hi = static_cast<int64_t>(std::ceil(mid + root / 2)) + 2;
    while (lo < hi && norm_of(lo) > J) ++lo;
    while (hi > lo && norm_of(hi) > J) --hi;
    if (norm_of(lo) > J) continue;
    int64_t r = mod_floor(i128{j} * I.b % I.s, I.s);
    int64_t first = lo + mod_floor(r - lo, I.s);
    for (int64_t x = first; x <= hi; x += I.s) {
      if (x == 0 && y == 0) continue;
      out.push_back({x, static_cast<int64_t>(y)});
    }
  }
  return out;
}

int64_t CMOrder::count_coprime_norm_ball(const IdealHNF& I, int64_t J) const {
  if (!is_coprime_to_conductor(I))
    throw ConductorCollision("count_coprime_norm_ball: not coprime to conductor");
  int64_t count = 0;
  for (const auto& a : norm_ball_elements(unit_ideal(), J))
    if (invertible_mod(a, I)) ++count;
  return count;
}

int64_t CMOrder::count_coprime_norm_ball_mobius(const IdealHNF& I, int64_t J) const {
  auto fac = factor_ideal(I);
  std::vector<IdealHNF> primes;
  for (const auto& f : fac) primes.push_back(f.prime);
  int64_t total = 0;
  size_t subsets = size_t{1} << primes.size();
  for (size_t mask = 0; mask < subsets; ++mask) {
    IdealHNF d = unit_ideal();
    int sign = 1;
    for (size_t i = 0; i < primes.size(); ++i) {
      if (mask & (size_t{1} << i)) {
        d = ideal_mul(d, primes[i]);
        sign = -sign;
      }
    }
    total += sign * count_norm_ball(d, J, false);
  }
  return total;
}

double CMOrder::longest_diagonal(const IdealHNF& I) const {
  double sq = std::sqrt(static_cast<double>(-D_));
  double b1x = static_cast<double>(I.s), b1y = 0.0;
  double b2x = static_cast<double>(I.b) + static_cast<double>(I.c) * D_ / 2.0;
  double b2y = static_cast<double>(I.c) * sq / 2.0;
  double d1 = std::hypot(b1x + b2x, b1y + b2y);
  double d2 = std::hypot(b1x - b2x, b1y - b2y);
  return std::max(d1, d2);
}

double CMOrder::norm_ball_main_term(const IdealHNF& I, int64_t J) const {
  return 2.0 * std::numbers::pi * static_cast<double>(J) /
         (unit_count_ * std::sqrt(static_cast<double>(-D_)) *
          static_cast<double>(I.norm()));
}

int64_t CMOrder::count_representations(OrderElement tau, OrderElement rho,
                                       const IdealHNF& I, int64_t J) const {
  if (!invertible_mod(tau, I))
    throw NotInvertible("count_representations: tau not invertible mod ideal");
  if (!invertible_mod(rho, I))
    throw NotInvertible("count_representations: rho not invertible mod ideal");
  int64_t T = multiplicative_order_mod(tau, I);
  std::map<std::pair<int64_t, int64_t>, int64_t> hist;
  for (const auto& g : norm_ball_elements(unit_ideal(), J)) {
    OrderElement r = reduce(g, I);
    ++hist[{r.x, r.y}];
  }
  OrderElement rho_inv = inverse_mod(rho, I);
  OrderElement cur = reduce(one(), I);
  int64_t total = 0;
  for (int64_t n = 1; n <= T; ++n) {
    cur = reduce(mul(cur, tau), I);
    OrderElement key = reduce(mul(cur, rho_inv), I);
    auto it = hist.find({key.x, key.y});
    if (it != hist.end()) total += it->second;
  }
  return total;
}

std::pair<int64_t, int64_t> CMOrder::representation_partition(
    OrderElement tau, const IdealHNF& I, int64_t J) const {
  int64_t T = multiplicative_order_mod(tau, I);
  int64_t lhs = 0;
  for (const auto& rho : invertible_residues(I))
    lhs += count_representations(tau, rho, I, J);
  int64_t rhs = T * count_coprime_norm_ball(I, J);
  return {lhs, rhs};
}

}  // namespace ecgen
