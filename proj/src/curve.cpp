#include "ecgen/curve.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

#include "ecgen/cm_order.hpp"

namespace ecgen {

namespace {

std::atomic<uint64_t> curve_counter{1};

int64_t ipow_checked(int64_t b, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (int64_t{1} << 61) / b) throw ScaleLimit("q^m overflow");
    r *= b;
  }
  return r;
}

}  // namespace

// Solves y^2 + h(x) y = g(x) for a fixed coefficient set. For odd p this
// completes the square against a precomputed table of squares; for p = 2
// it solves the Artin-Schreier equation z^2 + z = w by F_2 linear algebra.
class YSolver {
 public:
  YSolver(const FieldSpec& F, Fe a1, Fe a2, Fe a3, Fe a4, Fe a6,
          bool want_roots)
      : F_(F), a1_(a1), a2_(a2), a3_(a3), a4_(a4), a6_(a6) {
    if (F.q() > kEnumBudget) throw ScaleLimit("YSolver: field too large");
    odd_ = F.p() != 2;
    if (odd_) {
      inv2_ = F.inv(F.from_int(2));
      sq_.assign(static_cast<size_t>(F.q()), 0);
      if (want_roots) sqrt_idx_.assign(static_cast<size_t>(F.q()), UINT32_MAX);
      for (int64_t zi = 0; zi < F.q(); ++zi) {
        Fe z = F.from_index(zi);
        int64_t i2 = F.index(F.mul(z, z));
        sq_[i2] = 1;
        if (want_roots && sqrt_idx_[i2] == UINT32_MAX)
          sqrt_idx_[i2] = static_cast<uint32_t>(zi);
      }
    } else {
      // columns of z -> z^2 + z as bitmasks
      int n = F.k();
      pivot_col_.assign(n, 0);
      pivot_combo_.assign(n, 0);
      for (int i = 0; i < n; ++i) {
        Fe e{};
        e.c[i] = 1;
        Fe im = F.add(F.frobenius_p(e), e);
        uint32_t col = mask_of(im);
        uint32_t combo = uint32_t{1} << i;
        for (int b = n - 1; b >= 0; --b) {
          if (!(col & (uint32_t{1} << b))) continue;
          if (pivot_col_[b] == 0) {
            pivot_col_[b] = col;
            pivot_combo_[b] = combo;
            break;
          }
          col ^= pivot_col_[b];
          combo ^= pivot_combo_[b];
        }
      }
    }
  }

  Fe h_at(const Fe& x) const { return F_.add(F_.mul(a1_, x), a3_); }

  Fe g_at(const Fe& x) const {
    Fe t = F_.add(x, a2_);
    t = F_.add(F_.mul(t, x), a4_);
    return F_.add(F_.mul(t, x), a6_);
  }

  int count_at(const Fe& x) const {
    Fe h = h_at(x), g = g_at(x);
    if (odd_) {
      Fe d = F_.add(F_.mul(h, h), F_.mul_scalar(g, 4));
      if (F_.is_zero(d)) return 1;
      return sq_[F_.index(d)] ? 2 : 0;
    }
    if (F_.is_zero(h)) return 1;
    Fe hinv = F_.inv(h);
    Fe w = F_.mul(g, F_.mul(hinv, hinv));
    return F_.abs_trace(w) == 0 ? 2 : 0;
  }

  // Fills ys (ascending index order) and returns the count.
  int roots_at(const Fe& x, Fe ys[2]) const {
    Fe h = h_at(x), g = g_at(x);
    if (odd_) {
      Fe d = F_.add(F_.mul(h, h), F_.mul_scalar(g, 4));
      if (F_.is_zero(d)) {
        ys[0] = F_.mul(F_.neg(h), inv2_);
        return 1;
      }
      uint32_t zi = sqrt_idx_.at(static_cast<size_t>(F_.index(d)));
      if (zi == UINT32_MAX) return 0;
      Fe z = F_.from_index(zi);
      ys[0] = F_.mul(F_.sub(z, h), inv2_);
      ys[1] = F_.mul(F_.sub(F_.neg(z), h), inv2_);
      if (F_.index(ys[0]) > F_.index(ys[1])) std::swap(ys[0], ys[1]);
      return 2;
    }
    if (F_.is_zero(h)) {
      // y^2 = g has the single root g^{2^{n-1}}
      Fe y = g;
      for (int i = 0; i < F_.k() - 1; ++i) y = F_.frobenius_p(y);
      ys[0] = y;
      return 1;
    }
    Fe hinv = F_.inv(h);
    Fe w = F_.mul(g, F_.mul(hinv, hinv));
    uint32_t r = mask_of(w), combo = 0;
    for (int b = F_.k() - 1; b >= 0; --b) {
      if (!(r & (uint32_t{1} << b))) continue;
      if (pivot_col_[b] == 0) return 0;  // trace 1, no solution
      r ^= pivot_col_[b];
      combo ^= pivot_combo_[b];
    }
    Fe z0{};
    for (int i = 0; i < F_.k(); ++i) z0.c[i] = (combo >> i) & 1;
    Fe z1 = F_.add(z0, F_.one());
    ys[0] = F_.mul(h, z0);
    ys[1] = F_.mul(h, z1);
    if (F_.index(ys[0]) > F_.index(ys[1])) std::swap(ys[0], ys[1]);
    return 2;
  }

 private:
  uint32_t mask_of(const Fe& a) const {
    uint32_t m = 0;
    for (int i = 0; i < F_.k(); ++i)
      if (a.c[i]) m |= uint32_t{1} << i;
    return m;
  }

  const FieldSpec& F_;
  Fe a1_, a2_, a3_, a4_, a6_;
  bool odd_ = true;
  Fe inv2_{};
  std::vector<uint8_t> sq_;
  std::vector<uint32_t> sqrt_idx_;
  std::vector<uint32_t> pivot_col_, pivot_combo_;
};

Curve::Curve(FieldSpec F, Fe a1, Fe a2, Fe a3, Fe a4, Fe a6)
    : F_(std::move(F)), a1_(a1), a2_(a2), a3_(a3), a4_(a4), a6_(a6) {
  id_ = curve_counter.fetch_add(1);

  // Weierstrass discriminant; the b-quantities are the universal ones and
  // stay valid in characteristic 2 and 3.
  const FieldSpec& K = F_;
  Fe b2 = K.add(K.mul(a1, a1), K.mul_scalar(a2, 4));
  Fe b4 = K.add(K.mul_scalar(a4, 2), K.mul(a1, a3));
  Fe b6 = K.add(K.mul(a3, a3), K.mul_scalar(a6, 4));
  Fe b8 = K.add(K.sub(K.add(K.mul(K.mul(a1, a1), a6), K.mul_scalar(K.mul(a2, a6), 4)),
                      K.mul(K.mul(a1, a3), a4)),
                K.sub(K.mul(a2, K.mul(a3, a3)), K.mul(a4, a4)));
  Fe disc = K.sub(K.sub(K.neg(K.mul(K.mul(b2, b2), b8)),
                        K.mul_scalar(K.mul(K.mul(b4, b4), b4), 8)),
                  K.sub(K.mul_scalar(K.mul(b6, b6), 27),
                        K.mul_scalar(K.mul(K.mul(b2, b4), b6), 9)));
  if (K.is_zero(disc)) throw InvalidConfiguration("curve: singular equation");

  {
    // Count on a throwaway base-change; the cached over(1) is built later,
    // once the cardinality is known.
    Extension base(*this, 1);
    n_points_ = base.count_points();
  }
  trace_ = K.q() + 1 - n_points_;
  if (trace_ * trace_ > 4 * K.q()) throw Error("curve: Hasse bound violated");
  if (trace_ % K.p() == 0)
    throw SupersingularCurve("curve: supersingular (p | t), out of scope");

  int64_t delta = trace_ * trace_ - 4 * K.q();
  // delta = v^2 D_K with D_K fundamental
  int64_t v0 = 1, d0 = 1;
  for (auto [pp, e] : factor_integer(-delta)) {
    for (int i = 0; i + 1 < e; i += 2) v0 *= pp;
    if (e % 2 == 1) d0 *= pp;
  }
  if ((-d0 % 4 + 4) % 4 == 1) {
    D_K_ = -d0;
    v_ = v0;
  } else {
    D_K_ = -4 * d0;
    v_ = v0 / 2;
    if (v0 % 2 != 0) throw Error("curve: discriminant decomposition");
  }
  if (v_ * v_ * D_K_ != delta) throw Error("curve: discriminant decomposition");
}

int64_t Curve::weil_trace(int m) const {
  int64_t q = F_.q();
  int64_t t0 = 2, t1 = trace_;
  if (m == 0) return t0;
  ipow_checked(q, m);  // overflow guard
  for (int i = 2; i <= m; ++i) {
    int64_t t2 = trace_ * t1 - q * t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

int64_t Curve::weil_count(int m) const {
  return ipow_checked(F_.q(), m) + 1 - weil_trace(m);
}

const Extension& Curve::over(int m) const {
  std::lock_guard<std::mutex> lock(*ext_mutex_);
  auto it = extensions_.find(m);
  if (it == extensions_.end())
    it = extensions_.emplace(m, std::make_unique<Extension>(*this, m)).first;
  return *it->second;
}

Extension::Extension(const Curve& E, int m)
    : E_(&E),
      m_(m),
      F_(m == 1 ? E.field()
                : FieldSpec::with_default_modulus(E.field().p(),
                                                  E.field().k() * m)) {
  if (m < 1) throw InvalidConfiguration("extension: m must be >= 1");
  if (E.field().k() * m > kMaxFieldDegree)
    throw ScaleLimit("extension: degree beyond the tower cap");
  tag_ = (E.id() << 8) | static_cast<unsigned>(m);

  const FieldSpec& B = E.field();
  if (m == 1) {
    gen_image_ = B.gen();
  } else if (B.k() == 1) {
    gen_image_ = F_.from_int(B.gen().c[0]);
  } else {
    // deterministic embedding: smallest-index root of the base modulus
    if (F_.q() > kEnumBudget) throw ScaleLimit("extension: field too large");
    int64_t found = F_.q();
    int64_t qm = F_.q();
#pragma omp parallel for reduction(min : found) schedule(static)
    for (int64_t idx = 0; idx < qm; ++idx) {
      Fe z = F_.from_index(idx);
      Fe acc = F_.one();  // runs through z^i
      Fe val = F_.zero();
      for (int i = 0; i < B.k(); ++i) {
        val = F_.add(val, F_.mul_scalar(acc, B.modulus()[i]));
        acc = F_.mul(acc, z);
      }
      val = F_.add(val, acc);
      if (F_.is_zero(val)) found = std::min(found, idx);
    }
    if (found >= qm) throw Error("extension: no root of the base modulus");
    gen_image_ = F_.from_index(found);
  }

  embed_cols_.assign(B.k(), {});
  Fe col = F_.one();
  embed_cols_[0] = col.c;
  for (int i = 1; i < B.k(); ++i) {
    col = F_.mul(col, gen_image_);
    embed_cols_[i] = col.c;
  }

  a1_ = embed(E.a1());
  a2_ = embed(E.a2());
  a3_ = embed(E.a3());
  a4_ = embed(E.a4());
  a6_ = embed(E.a6());

  // q-power Frobenius as a linear map over F_p
  frobq_cols_.assign(F_.k(), {});
  Fe gq = F_.pow(F_.gen(), B.q());
  Fe fcol = F_.one();
  frobq_cols_[0] = fcol.c;
  for (int i = 1; i < F_.k(); ++i) {
    fcol = F_.mul(fcol, gq);
    frobq_cols_[i] = fcol.c;
  }

  n_points_ = m == 1 ? 0 : E.weil_count(m);
  // m = 1 is filled by the curve constructor via count_points(); when the
  // curve is already built, use its cached cardinality.
  if (m == 1 && E.n_points() > 0) n_points_ = E.n_points();
}

Fe Extension::embed(const Fe& a) const {
  Fe r{};
  int64_t p = F_.p();
  for (int i = 0; i < E_->field().k(); ++i) {
    if (a.c[i] == 0) continue;
    int64_t ai = a.c[i];
    const auto& col = embed_cols_[i];
    for (int j = 0; j < F_.k(); ++j)
      r.c[j] = static_cast<uint32_t>((r.c[j] + ai * col[j]) % p);
  }
  return r;
}

bool Extension::on_curve(const Fe& x, const Fe& y) const {
  const FieldSpec& K = F_;
  Fe lhs = K.add(K.mul(y, y), K.mul(y, K.add(K.mul(a1_, x), a3_)));
  Fe t = K.add(x, a2_);
  t = K.add(K.mul(t, x), a4_);
  Fe rhs = K.add(K.mul(t, x), a6_);
  return lhs == rhs;
}

Point Extension::make(const Fe& x, const Fe& y) const {
  if (!on_curve(x, y))
    throw InvalidConfiguration("point: coordinates not on the curve");
  return Point{false, x, y, tag_};
}

void Extension::check_tag(const Point& P) const {
  if (P.tag != tag_)
    throw DomainMismatch("point belongs to a different curve or extension");
}

Point Extension::neg(const Point& P) const {
  check_tag(P);
  if (P.inf) return P;
  Fe ny = F_.neg(F_.add(P.y, F_.add(F_.mul(a1_, P.x), a3_)));
  return Point{false, P.x, ny, tag_};
}

Point Extension::add(const Point& P, const Point& Q) const {
  check_tag(P);
  check_tag(Q);
  if (P.inf) return Q;
  if (Q.inf) return P;
  const FieldSpec& K = F_;
  Fe lambda;
  if (P.x == Q.x) {
    // either a doubling or P + (-P)
    Fe denom = K.add(K.add(P.y, P.y), K.add(K.mul(a1_, P.x), a3_));
    if (!(P.y == Q.y)) return infinity();
    if (K.is_zero(denom)) return infinity();
    Fe num = K.add(K.sub(K.add(K.mul_scalar(K.mul(P.x, P.x), 3),
                               K.mul_scalar(K.mul(a2_, P.x), 2)),
                         K.mul(a1_, P.y)),
                   a4_);
    lambda = K.div(num, denom);
  } else {
    lambda = K.div(K.sub(Q.y, P.y), K.sub(Q.x, P.x));
  }
  Fe x3 = K.sub(K.sub(K.add(K.mul(lambda, lambda), K.mul(a1_, lambda)),
                      a2_),
                K.add(P.x, Q.x));
  Fe y3 = K.sub(K.sub(K.mul(lambda, K.sub(P.x, x3)), P.y),
                K.add(K.mul(a1_, x3), a3_));
  return Point{false, x3, y3, tag_};
}

Point Extension::scalar_mul(int64_t n, const Point& P) const {
  check_tag(P);
  if (n < 0) return scalar_mul(-n, neg(P));
  Point r = infinity();
  Point base = P;
  while (n > 0) {
    if (n & 1) r = add(r, base);
    base = add(base, base);
    n >>= 1;
  }
  return r;
}

Point Extension::frobenius(const Point& P) const {
  check_tag(P);
  if (P.inf) return P;
  auto apply = [&](const Fe& a) {
    Fe r{};
    int64_t p = F_.p();
    for (int i = 0; i < F_.k(); ++i) {
      if (a.c[i] == 0) continue;
      int64_t ai = a.c[i];
      const auto& col = frobq_cols_[i];
      for (int j = 0; j < F_.k(); ++j)
        r.c[j] = static_cast<uint32_t>((r.c[j] + ai * col[j]) % p);
    }
    return r;
  };
  return Point{false, apply(P.x), apply(P.y), tag_};
}

int64_t Extension::point_order(const Point& P) const {
  check_tag(P);
  if (P.inf) return 1;
  int64_t ord = n_points_;
  for (auto [pp, e] : factor_integer(n_points_)) {
    for (int i = 0; i < e; ++i) {
      if (ord % pp != 0) break;
      if (scalar_mul(ord / pp, P).inf)
        ord /= pp;
      else
        break;
    }
  }
  return ord;
}

int64_t Extension::count_points(bool parallel) const {
  if (F_.q() > kEnumBudget) throw ScaleLimit("count_points: q^m beyond budget");
  YSolver sol(F_, a1_, a2_, a3_, a4_, a6_, false);
  int64_t qm = F_.q();
  int64_t total = 0;
  if (parallel) {
#pragma omp parallel for reduction(+ : total) schedule(static)
    for (int64_t xi = 0; xi < qm; ++xi)
      total += sol.count_at(F_.from_index(xi));
  } else {
    for (int64_t xi = 0; xi < qm; ++xi)
      total += sol.count_at(F_.from_index(xi));
  }
  return total + 1;
}

void Extension::for_each_point(const std::function<void(const Point&)>& fn) const {
  if (F_.q() > kEnumBudget) throw ScaleLimit("for_each_point: q^m beyond budget");
  YSolver sol(F_, a1_, a2_, a3_, a4_, a6_, true);
  Fe ys[2];
  for (int64_t xi = 0; xi < F_.q(); ++xi) {
    Fe x = F_.from_index(xi);
    int cnt = sol.roots_at(x, ys);
    for (int i = 0; i < cnt; ++i) fn(Point{false, x, ys[i], tag_});
  }
  fn(infinity());
}

bool Extension::for_each_point_until(
    const std::function<bool(const Point&)>& fn) const {
  if (F_.q() > kEnumBudget) throw ScaleLimit("for_each_point: q^m beyond budget");
  YSolver sol(F_, a1_, a2_, a3_, a4_, a6_, true);
  Fe ys[2];
  for (int64_t xi = 0; xi < F_.q(); ++xi) {
    Fe x = F_.from_index(xi);
    int cnt = sol.roots_at(x, ys);
    for (int i = 0; i < cnt; ++i)
      if (fn(Point{false, x, ys[i], tag_})) return true;
  }
  return fn(infinity());
}

std::vector<Point> Extension::points() const {
  std::vector<Point> out;
  out.reserve(static_cast<size_t>(n_points_));
  for_each_point([&](const Point& P) { out.push_back(P); });
  return out;
}

std::vector<Point> Extension::torsion_points(int64_t a, bool parallel) const {
  if (F_.q() > kEnumBudget) throw ScaleLimit("torsion scan: q^m beyond budget");
  std::vector<Point> out;
  out.push_back(infinity());
  YSolver sol(F_, a1_, a2_, a3_, a4_, a6_, true);
  int64_t qm = F_.q();
  if (parallel) {
#pragma omp parallel
    {
      std::vector<Point> local;
      Fe ys[2];
#pragma omp for schedule(static) nowait
      for (int64_t xi = 0; xi < qm; ++xi) {
        Fe x = F_.from_index(xi);
        int cnt = sol.roots_at(x, ys);
        for (int i = 0; i < cnt; ++i) {
          Point P{false, x, ys[i], tag_};
          if (scalar_mul(a, P).inf) local.push_back(P);
        }
      }
#pragma omp critical
      out.insert(out.end(), local.begin(), local.end());
    }
    std::sort(out.begin(), out.end(),
              [&](const Point& A, const Point& B) { return key(A) < key(B); });
  } else {
    Fe ys[2];
    for (int64_t xi = 0; xi < qm; ++xi) {
      Fe x = F_.from_index(xi);
      int cnt = sol.roots_at(x, ys);
      for (int i = 0; i < cnt; ++i) {
        Point P{false, x, ys[i], tag_};
        if (scalar_mul(a, P).inf) out.push_back(P);
      }
    }
    std::sort(out.begin(), out.end(),
              [&](const Point& A, const Point& B) { return key(A) < key(B); });
  }
  return out;
}

int64_t Extension::key(const Point& P) const {
  if (P.inf) return -1;
  return F_.index(P.x) * F_.q() + F_.index(P.y);
}

TorsionShape rational_torsion(const Curve& E, int64_t a, int m, bool parallel) {
  if (a < 1) throw InvalidConfiguration("rational_torsion: a must be >= 1");
  const Extension& X = E.over(m);
  auto pts = X.torsion_points(a, parallel);
  int64_t count = static_cast<int64_t>(pts.size());
  int64_t d2 = 1;
  for (const auto& P : pts) d2 = std::lcm(d2, X.point_order(P));
  int64_t d1 = count / d2;
  if (d1 * d2 != count || d2 % d1 != 0)
    throw Error("rational_torsion: inconsistent subgroup shape");
  return {d1, d2};
}

TorsionShape group_structure(const Extension& X) {
  int64_t d2 = 1;
  X.for_each_point([&](const Point& P) { d2 = std::lcm(d2, X.point_order(P)); });
  int64_t n = X.n_points();
  int64_t d1 = n / d2;
  if (d1 * d2 != n || d2 % d1 != 0)
    throw Error("group_structure: inconsistent shape");
  return {d1, d2};
}

}  // namespace ecgen
