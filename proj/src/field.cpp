#include "ecgen/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ecgen {

namespace {

// Dense polynomial helpers over F_p, coefficient vectors constant-first.
// Used for the irreducibility test before any FieldSpec tables exist.

using Poly = std::vector<int64_t>;

Poly poly_trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& f, int64_t p) {
  // f is monic of degree k, given with its leading 1 included.
  std::vector<int64_t> prod(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  size_t k = f.size() - 1;
  for (size_t d = prod.size(); d-- > k;) {
    int64_t c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (size_t j = 0; j < k; ++j)
      prod[d - k + j] = ((prod[d - k + j] - c * f[j]) % p + p) % p;
  }
  prod.resize(k);
  return prod;
}

Poly poly_pow_p(Poly base, int64_t p, const Poly& f) {
  // base^p mod f by square and multiply.
  Poly result{1};
  int64_t e = p;
  while (e > 0) {
    if (e & 1) result = poly_mul_mod(result, base, f, p);
    base = poly_mul_mod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

Poly poly_mod(Poly a, const Poly& b, int64_t p) {
  a = poly_trim(std::move(a));
  Poly bb = poly_trim(b);
  int64_t lead_inv = mod_inverse(((bb.back() % p) + p) % p, p);
  while (a.size() >= bb.size() && !a.empty()) {
    int64_t c = a.back() * lead_inv % p;
    size_t shift = a.size() - bb.size();
    for (size_t j = 0; j < bb.size(); ++j)
      a[shift + j] = ((a[shift + j] - c * bb[j]) % p + p) % p;
    a = poly_trim(std::move(a));
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
  a = poly_trim(std::move(a));
  b = poly_trim(std::move(b));
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

bool is_prime_i64(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int64_t pow_mod(int64_t base, int64_t exp, int64_t mod) {
  int64_t r = 1 % mod;
  base %= mod;
  if (base < 0) base += mod;
  while (exp > 0) {
    if (exp & 1) r = static_cast<__int128>(r) * base % mod;
    base = static_cast<__int128>(base) * base % mod;
    exp >>= 1;
  }
  return r;
}

int64_t mod_inverse(int64_t a, int64_t m) {
  int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1 != 0) {
    int64_t qd = g / a1;
    g -= qd * a1;
    std::swap(g, a1);
    x -= qd * x1;
    std::swap(x, x1);
  }
  if (g != 1) throw NotInvertible("mod_inverse: gcd != 1");
  return ((x % m) + m) % m;
}

bool FieldSpec::is_irreducible(int64_t p, const std::vector<int64_t>& mod) {
  int k = static_cast<int>(mod.size());
  if (k == 1) return true;  // monic linear
  Poly f(mod.begin(), mod.end());
  f.push_back(1);  // leading coefficient
  // Rabin: X^{p^k} == X mod f, and gcd(X^{p^{k/r}} - X, f) = 1 for every
  // prime r | k.
  Poly x{0, 1};
  Poly xp = x;
  std::vector<Poly> iterates(k + 1);
  iterates[0] = x;
  for (int j = 1; j <= k; ++j) {
    xp = poly_pow_p(xp, p, f);
    iterates[j] = xp;
  }
  Poly diff = iterates[k];
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  if (!poly_trim(diff).empty()) return false;
  for (int r = 2; r <= k; ++r) {
    if (k % r != 0) continue;
    bool r_prime = true;
    for (int d = 2; d * d <= r; ++d)
      if (r % d == 0) r_prime = false;
    if (!r_prime) continue;
    Poly g = iterates[k / r];
    if (g.size() < 2) g.resize(2, 0);
    g[1] = ((g[1] - 1) % p + p) % p;
    Poly gc = poly_gcd(g, f, p);
    if (poly_trim(gc).size() != 1) return false;
  }
  return true;
}

std::vector<int64_t> FieldSpec::default_modulus(int64_t p, int k) {
  if (k == 1) return {0};
  // Enumerate monic polynomials with the constant coordinate varying
  // slowest, so serialized specs are reproducible.
  int64_t total = 1;
  for (int i = 0; i < k; ++i) {
    if (total > 200000000 / p) throw ScaleLimit("default_modulus: p^k too large");
    total *= p;
  }
  for (int64_t n = 0; n < total; ++n) {
    std::vector<int64_t> c(k);
    int64_t v = n;
    for (int i = k - 1; i >= 0; --i) {
      c[i] = v % p;
      v /= p;
    }
    if (is_irreducible(p, c)) return c;
  }
  throw InvalidConfiguration("default_modulus: none found");
}

FieldSpec FieldSpec::with_default_modulus(int64_t p, int k) {
  return FieldSpec(p, k, default_modulus(p, k));
}

FieldSpec::FieldSpec(int64_t p, int k, std::vector<int64_t> modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)) {
  if (p < 2 || p > (1 << 20) || !is_prime_i64(p))
    throw InvalidConfiguration("field: p must be a prime <= 2^20");
  if (k < 1 || k > kMaxFieldDegree)
    throw InvalidConfiguration("field: extension degree out of range");
  if (static_cast<int>(modulus_.size()) != k)
    throw InvalidConfiguration("field: modulus must have k coefficients");
  for (auto& c : modulus_) c = ((c % p) + p) % p;
  q_ = 1;
  for (int i = 0; i < k; ++i) {
    if (q_ > (int64_t{1} << 62) / p) throw ScaleLimit("field: q overflow");
    q_ *= p;
  }
  if (!is_irreducible(p_, modulus_))
    throw InvalidConfiguration("field: modulus is reducible");

  // X^{k+i} mod f rows for the multiplication reducer.
  red_.assign(std::max(0, k - 1), {});
  if (k >= 2) {
    std::array<uint32_t, kMaxFieldDegree> cur{};  // X^k mod f = -c
    for (int j = 0; j < k; ++j)
      cur[j] = static_cast<uint32_t>((p - modulus_[j]) % p);
    red_[0] = cur;
    for (int i = 1; i < k - 1; ++i) {
      // multiply by X and reduce once
      std::array<uint32_t, kMaxFieldDegree> nxt{};
      uint32_t top = cur[k - 1];
      for (int j = k - 1; j >= 1; --j) nxt[j] = cur[j - 1];
      nxt[0] = 0;
      if (top != 0) {
        for (int j = 0; j < k; ++j) {
          int64_t vj = nxt[j] + static_cast<int64_t>(top) * ((p - modulus_[j]) % p);
          nxt[j] = static_cast<uint32_t>(vj % p);
        }
      }
      red_[i] = nxt;
      cur = nxt;
    }
  }

  // p-power Frobenius columns.
  frob_cols_.assign(k, {});
  Fe gp = pow(gen(), p_);
  Fe col = one();
  frob_cols_[0] = col.c;
  for (int i = 1; i < k; ++i) {
    col = mul(col, gp);
    frob_cols_[i] = col.c;
  }

  // Trace form Tr(X^i).
  for (int i = 0; i < k; ++i) {
    Fe t = from_index(0);
    t.c[i] = 1;
    Fe acc = t;
    for (int j = 1; j < k; ++j) {
      t = frobenius_p(t);
      acc = add(acc, t);
    }
    for (int j = 1; j < k; ++j) {
      if (acc.c[j] != 0)
        throw InvalidConfiguration("field: trace form not rational");
    }
    trace_form_[i] = acc.c[0];
  }
}

Fe FieldSpec::gen() const {
  Fe g{};
  if (k_ == 1) {
    // modulus is X + c0, so the class of X is -c0
    g.c[0] = static_cast<uint32_t>((p_ - modulus_[0]) % p_);
  } else {
    g.c[1] = 1;
  }
  return g;
}

Fe FieldSpec::from_int(int64_t n) const {
  Fe r{};
  r.c[0] = static_cast<uint32_t>(((n % p_) + p_) % p_);
  return r;
}

Fe FieldSpec::from_coords(const std::vector<int64_t>& v) const {
  if (static_cast<int>(v.size()) != k_)
    throw InvalidConfiguration("from_coords: wrong length");
  Fe r{};
  for (int i = 0; i < k_; ++i)
    r.c[i] = static_cast<uint32_t>(((v[i] % p_) + p_) % p_);
  return r;
}

std::vector<int64_t> FieldSpec::coords(const Fe& a) const {
  std::vector<int64_t> v(k_);
  for (int i = 0; i < k_; ++i) v[i] = a.c[i];
  return v;
}

bool FieldSpec::is_zero(const Fe& a) const {
  for (int i = 0; i < k_; ++i)
    if (a.c[i] != 0) return false;
  return true;
}

Fe FieldSpec::add(const Fe& a, const Fe& b) const {
  Fe r{};
  for (int i = 0; i < k_; ++i) {
    uint32_t s = a.c[i] + b.c[i];
    r.c[i] = s >= p_ ? s - static_cast<uint32_t>(p_) : s;
  }
  return r;
}

Fe FieldSpec::sub(const Fe& a, const Fe& b) const {
  Fe r{};
  for (int i = 0; i < k_; ++i) {
    int64_t s = static_cast<int64_t>(a.c[i]) - b.c[i];
    r.c[i] = static_cast<uint32_t>(s < 0 ? s + p_ : s);
  }
  return r;
}

Fe FieldSpec::neg(const Fe& a) const {
  Fe r{};
  for (int i = 0; i < k_; ++i)
    r.c[i] = a.c[i] == 0 ? 0 : static_cast<uint32_t>(p_ - a.c[i]);
  return r;
}

Fe FieldSpec::mul(const Fe& a, const Fe& b) const {
  if (k_ == 1) {
    Fe r{};
    r.c[0] = static_cast<uint32_t>(static_cast<int64_t>(a.c[0]) * b.c[0] % p_);
    return r;
  }
  int64_t prod[2 * kMaxFieldDegree] = {0};
  for (int i = 0; i < k_; ++i) {
    if (a.c[i] == 0) continue;
    int64_t ai = a.c[i];
    for (int j = 0; j < k_; ++j) prod[i + j] += ai * b.c[j] % p_;
  }
  Fe r{};
  for (int j = 0; j < k_; ++j) r.c[j] = static_cast<uint32_t>(prod[j] % p_);
  for (int d = k_; d <= 2 * k_ - 2; ++d) {
    int64_t c = prod[d] % p_;
    if (c == 0) continue;
    const auto& row = red_[d - k_];
    for (int j = 0; j < k_; ++j)
      r.c[j] = static_cast<uint32_t>((r.c[j] + c * row[j]) % p_);
  }
  return r;
}

Fe FieldSpec::mul_scalar(const Fe& a, int64_t s) const {
  s = ((s % p_) + p_) % p_;
  Fe r{};
  for (int i = 0; i < k_; ++i)
    r.c[i] = static_cast<uint32_t>(a.c[i] * s % p_);
  return r;
}

Fe FieldSpec::inv(const Fe& a) const {
  if (is_zero(a)) throw DivisionByZero("field: inversion of zero");
  if (k_ == 1) {
    Fe r{};
    r.c[0] = static_cast<uint32_t>(mod_inverse(a.c[0], p_));
    return r;
  }
  // Extended Euclid on (a, f) over F_p.
  Poly f(modulus_.begin(), modulus_.end());
  f.push_back(1);
  Poly r0 = f, r1(k_);
  for (int i = 0; i < k_; ++i) r1[i] = a.c[i];
  r1 = poly_trim(std::move(r1));
  Poly s0{0}, s1{1};
  while (true) {
    r0 = poly_trim(std::move(r0));
    r1 = poly_trim(std::move(r1));
    if (r1.empty()) throw DivisionByZero("field: inverse does not exist");
    if (r1.size() == 1) {
      int64_t c = mod_inverse(r1[0], p_);
      Fe out{};
      for (size_t i = 0; i < s1.size() && i < static_cast<size_t>(k_); ++i)
        out.c[i] = static_cast<uint32_t>(((s1[i] * c) % p_ + p_) % p_);
      return out;
    }
    // one division step: r0 = q r1 + r
    int64_t lead_inv = mod_inverse(r1.back(), p_);
    while (r0.size() >= r1.size()) {
      int64_t c = r0.back() * lead_inv % p_;
      size_t shift = r0.size() - r1.size();
      for (size_t j = 0; j < r1.size(); ++j)
        r0[shift + j] = ((r0[shift + j] - c * r1[j]) % p_ + p_) % p_;
      if (s0.size() < shift + s1.size()) s0.resize(shift + s1.size(), 0);
      for (size_t j = 0; j < s1.size(); ++j)
        s0[shift + j] = ((s0[shift + j] - c * s1[j]) % p_ + p_) % p_;
      r0 = poly_trim(std::move(r0));
      if (r0.empty()) break;
    }
    std::swap(r0, r1);
    std::swap(s0, s1);
  }
}

Fe FieldSpec::pow(const Fe& a, int64_t e) const {
  if (e < 0) return pow(inv(a), -e);
  Fe base = a, r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Fe FieldSpec::frobenius_p(const Fe& a) const {
  Fe r{};
  for (int i = 0; i < k_; ++i) {
    if (a.c[i] == 0) continue;
    int64_t ai = a.c[i];
    const auto& col = frob_cols_[i];
    for (int j = 0; j < k_; ++j)
      r.c[j] = static_cast<uint32_t>((r.c[j] + ai * col[j]) % p_);
  }
  return r;
}

uint32_t FieldSpec::abs_trace(const Fe& a) const {
  int64_t t = 0;
  for (int i = 0; i < k_; ++i) t += static_cast<int64_t>(a.c[i]) * trace_form_[i];
  return static_cast<uint32_t>(t % p_);
}

std::complex<double> FieldSpec::additive_character(const Fe& a, int64_t j) const {
  int64_t jm = ((j % p_) + p_) % p_;
  if (jm == 0)
    throw TrivialCharacter("additive_character: j = 0 selects the trivial character");
  int64_t t = jm * abs_trace(a) % p_;
  double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(p_);
  return {std::cos(angle), std::sin(angle)};
}

int64_t FieldSpec::index(const Fe& a) const {
  int64_t idx = 0;
  for (int i = k_ - 1; i >= 0; --i) idx = idx * p_ + a.c[i];
  return idx;
}

Fe FieldSpec::from_index(int64_t idx) const {
  Fe r{};
  for (int i = 0; i < k_; ++i) {
    r.c[i] = static_cast<uint32_t>(idx % p_);
    idx /= p_;
  }
  return r;
}

}  // namespace ecgen
