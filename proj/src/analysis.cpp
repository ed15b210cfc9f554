#include "ecgen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ecgen {

namespace {

struct KahanComplex {
  std::complex<double> sum{0, 0};
  std::complex<double> carry{0, 0};

  void add(std::complex<double> v) {
    std::complex<double> y = v - carry;
    std::complex<double> t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

std::complex<double> exp_sum(const Sequence& seq, int64_t j) {
  const FieldSpec& F = *seq.field;
  KahanComplex acc;
  for (const auto& e : seq.s) {
    if (e.pole) continue;  // psi(f(Q)) = 0 at poles
    acc.add(F.additive_character(e.value, j));
  }
  return acc.sum;
}

std::complex<double> exp_sum(const Generator& g, const Observable& f, int64_t j,
                             int64_t count) {
  Generator copy = g;
  Sequence seq = copy.emit(f, count);
  return exp_sum(seq, j);
}

double single_function_char_sum_bound(int deg_f, int64_t q) {
  return 2.0 * deg_f * std::sqrt(static_cast<double>(q));
}

namespace {

bool ratio_is_pi_power(const EndRing& ring, const Endomorphism& a,
                       const Endomorphism& b) {
  // a/b = unit * pi^t forces n(a) = n(b) q^t; check both directions.
  const CMOrder& O = ring.order();
  int64_t q = ring.curve().field().q();
  OrderElement ea = ring.to_order_element(a), eb = ring.to_order_element(b);
  int64_t na = O.norm(ea), nb = O.norm(eb);
  for (int dir = 0; dir < 2; ++dir) {
    int64_t hi = dir == 0 ? na : nb, lo = dir == 0 ? nb : na;
    if (hi % lo == 0) {
      int64_t r = hi / lo;
      int t = 0;
      while (r > 1 && r % q == 0) {
        r /= q;
        ++t;
      }
      if (r == 1) {
        OrderElement big = dir == 0 ? ea : eb;
        OrderElement small = dir == 0 ? eb : ea;
        OrderElement cand = O.mul(small, O.pow(ring.pi(), t));
        if (O.associated(big, cand)) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::complex<double> subgroup_char_sum(const EndRing& ring, const SubgroupSpec& H,
                                       const Observable& f, int64_t j,
                                       const std::vector<Fe>& coeffs,
                                       const std::vector<Endomorphism>& taus) {
  if (coeffs.size() != taus.size() || taus.empty())
    throw InvalidConfiguration("char sum: need matching coefficients and maps");
  const Extension& X1 = ring.curve().over(1);
  const FieldSpec& F = ring.curve().field();
  bool some_nonzero = false;
  for (const auto& c : coeffs)
    if (!F.is_zero(c)) some_nonzero = true;
  if (!some_nonzero)
    throw InvalidConfiguration("char sum: all coefficients are zero");
  for (size_t i = 0; i < taus.size(); ++i) {
    if (ring.endo_norm(taus[i]) <= 0)
      throw InvalidConfiguration("char sum: zero map");
    if (!ring.coprime_to_conductor(taus[i]))
      throw InvalidConfiguration("char sum: map not coprime to the conductor");
    for (size_t l = i + 1; l < taus.size(); ++l) {
      if (ring.order().associated(ring.to_order_element(taus[i]),
                                  ring.to_order_element(taus[l])))
        throw InvalidConfiguration("char sum: associated maps");
      if (ratio_is_pi_power(ring, taus[i], taus[l]))
        throw InvalidConfiguration("char sum: ratio is a Frobenius power");
    }
  }

  std::vector<Point> points;
  switch (H.kind) {
    case SubgroupKind::Trivial:
      points.push_back(X1.infinity());
      break;
    case SubgroupKind::Full:
      points = X1.points();
      break;
    case SubgroupKind::EndoSpan:
      points = ring.endomorphism_orbit(H.base);
      break;
  }

  KahanComplex acc;
  for (const auto& Q : points) {
    bool pole = Q.inf;
    Fe val = F.zero();
    if (!pole) {
      for (size_t i = 0; i < taus.size(); ++i) {
        Point R = ring.apply(taus[i], Q, X1);
        if (R.inf) {
          pole = true;
          break;
        }
        val = F.add(val, F.mul(coeffs[i], f.eval(F, R)));
      }
    }
    if (pole) continue;  // psi contribution 0 at poles
    acc.add(F.additive_character(val, j));
  }
  return acc.sum;
}

// ---- bound evaluators ----

static void check_params(const BoundParams& P) {
  if (P.nu < 1) throw InvalidConfiguration("bounds: nu must be >= 1");
  if (P.T < 1 || P.ell < 1 || P.q < 2 || P.deg_f < 1 || P.norm_ann < 1)
    throw InvalidConfiguration("bounds: parameters must be positive");
}

double bound_theorem1(const BoundParams& P) {
  check_params(P);
  double nu = P.nu;
  double eT = 1.0 - (3 * nu + 2) / (2 * nu * (nu + 2));
  double eL = (2 * nu + 2) / (nu * (nu + 2));
  double eQ = 1.0 / (4 * (nu + 2));
  return P.deg_f * std::pow(P.T, eT) * std::pow(P.ell, eL) * std::pow(P.q, eQ);
}

double bound_theorem2(const BoundParams& P) {
  check_params(P);
  double nu = P.nu;
  double first = P.deg_f * std::pow(P.abs_D_E, 1.0 / (4 * (nu + 1))) *
                 std::pow(P.T, 1.0 - (2 * nu + 1) / (2 * nu * (nu + 1))) *
                 std::pow(P.norm_ann, 1.0 / (2 * nu)) *
                 std::pow(P.q, 1.0 / (4 * (nu + 1)));
  double second = P.deg_f * std::pow(P.abs_D_E, 1.0 / nu) *
                  std::pow(P.T, 1.0 - 1.0 / (2 * nu)) *
                  std::pow(P.q, 1.0 / (4 * nu));
  return std::max(first, second);
}

double bound_theorem3(const BoundParams& P) {
  check_params(P);
  double first = P.T / (std::pow(P.ell, 4.0 / 3.0) * std::cbrt(P.deg_f));
  double second = P.T / (std::pow(P.abs_D_E, 5.0 / 4.0) *
                         std::sqrt(P.norm_ann) * std::pow(P.deg_f, 5.0 / 4.0));
  return std::max(first, second);
}

double discrepancy_box_factor(const BoundParams& P) {
  return std::pow(std::log(static_cast<double>(P.p)) + 1.0, P.k);
}

bool theorem1_hypothesis(const BoundParams& P) {
  return P.ell >= std::pow(P.q, 0.25 + P.epsilon);
}

bool theorem1_nontrivial(const BoundParams& P) {
  return P.T >= std::pow(P.ell, 4.0 / 3.0) * std::pow(P.q, 1.0 / 6.0 + P.epsilon);
}

bool theorem2_hypothesis(const BoundParams& P) {
  return P.norm_ann >= std::pow(P.q, 0.5 + P.epsilon);
}

bool theorem2_nontrivial(const BoundParams& P) {
  double a = std::pow(P.abs_D_E, 0.25) * std::sqrt(P.norm_ann) *
             std::pow(P.q, 0.25 + P.epsilon);
  double b = P.abs_D_E * P.abs_D_E * P.q;
  return P.T >= std::max(a, b);
}

bool theorem3_hypothesis(const BoundParams& P) {
  return P.deg_f < std::pow(P.ell, 2.0 - P.epsilon);
}

// ---- discrepancy ----

namespace {

// Deterministic bounded sampler; mt19937_64 output mapped by remainder so
// box fixtures do not depend on library distribution internals.
int64_t draw(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  return lo + static_cast<int64_t>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

struct BoxGrid {
  int64_t p = 2;
  int dims = 1;
  int64_t cells = 1;      // p^dims
  int64_t used = 0;       // entries kept (poles dropped)
  std::vector<int64_t> prefix;  // (p+1)^dims cumulative counts

  int64_t prefix_at(const std::vector<int64_t>& c) const {
    int64_t idx = 0;
    for (int d = dims - 1; d >= 0; --d) idx = idx * (p + 1) + c[d];
    return prefix[idx];
  }

  // #hits in prod [alpha_d, beta_d) by inclusion-exclusion over corners.
  int64_t box_count(const std::vector<int64_t>& alpha,
                    const std::vector<int64_t>& beta) const {
    int64_t total = 0;
    std::vector<int64_t> corner(dims);
    for (int mask = 0; mask < (1 << dims); ++mask) {
      int sign = 1;
      for (int d = 0; d < dims; ++d) {
        if (mask & (1 << d)) {
          corner[d] = alpha[d];
          sign = -sign;
        } else {
          corner[d] = beta[d];
        }
      }
      total += sign * prefix_at(corner);
    }
    return total;
  }
};

BoxGrid build_grid(const Sequence& seq, const std::vector<int>& coord_subset) {
  const FieldSpec& F = *seq.field;
  std::vector<int> dims_sel = coord_subset;
  if (dims_sel.empty())
    for (int i = 0; i < F.k(); ++i) dims_sel.push_back(i);
  for (int d : dims_sel)
    if (d < 0 || d >= F.k())
      throw InvalidConfiguration("discrepancy: coordinate out of range");

  BoxGrid G;
  G.p = F.p();
  G.dims = static_cast<int>(dims_sel.size());
  for (int d = 0; d < G.dims; ++d) {
    if (G.cells > kEnumBudget / G.p)
      throw ScaleLimit("discrepancy: projected space too large");
    G.cells *= G.p;
  }
  std::vector<int64_t> hist(static_cast<size_t>(G.cells), 0);
  for (const auto& e : seq.s) {
    if (e.pole) continue;  // dropped from both counts and length
    int64_t idx = 0;
    for (int d = G.dims - 1; d >= 0; --d)
      idx = idx * G.p + e.value.c[dims_sel[d]];
    ++hist[idx];
    ++G.used;
  }

  // cumulative counts on the (p+1)^dims grid
  int64_t psz = 1;
  for (int d = 0; d < G.dims; ++d) psz *= G.p + 1;
  G.prefix.assign(static_cast<size_t>(psz), 0);
  std::vector<int64_t> c(G.dims);
  for (int64_t cell = 0; cell < G.cells; ++cell) {
    int64_t t = cell;
    int64_t pidx = 0;
    for (int d = 0; d < G.dims; ++d) {
      c[d] = t % G.p;
      t /= G.p;
    }
    for (int d = G.dims - 1; d >= 0; --d) pidx = pidx * (G.p + 1) + (c[d] + 1);
    G.prefix[pidx] = hist[cell];
  }
  // sum along each axis
  for (int axis = 0; axis < G.dims; ++axis) {
    int64_t stride = 1;
    for (int d = 0; d < axis; ++d) stride *= G.p + 1;
    for (int64_t i = 0; i < psz; ++i) {
      int64_t coord = (i / stride) % (G.p + 1);
      if (coord > 0) G.prefix[i] += G.prefix[i - stride];
    }
  }
  return G;
}

double box_deviation(const BoxGrid& G, const std::vector<int64_t>& alpha,
                     const std::vector<int64_t>& beta) {
  int64_t n = G.box_count(alpha, beta);
  double vol = 1;
  for (int d = 0; d < G.dims; ++d) vol *= static_cast<double>(beta[d] - alpha[d]);
  double qd = 1;
  for (int d = 0; d < G.dims; ++d) qd *= static_cast<double>(G.p);
  double expected = vol / qd * static_cast<double>(G.used);
  return std::abs(static_cast<double>(n) - expected);
}

double discrepancy_impl(const Sequence& seq, const BoxMode& mode,
                        const std::vector<int>& coord_subset, bool parallel) {
  BoxGrid G = build_grid(seq, coord_subset);
  int64_t pairs = G.p * (G.p + 1) / 2;
  if (mode.all) {
    double boxes = 1;
    for (int d = 0; d < G.dims; ++d) boxes *= static_cast<double>(pairs);
    if (boxes > 5e7) throw ScaleLimit("discrepancy: box family too large for `all`");
    int64_t total = 1;
    for (int d = 0; d < G.dims; ++d) total *= pairs;
    double best = 0;
#pragma omp parallel for reduction(max : best) schedule(static) if (parallel)
    for (int64_t e = 0; e < total; ++e) {
      std::vector<int64_t> alpha(G.dims), beta(G.dims);
      int64_t t = e;
      for (int d = 0; d < G.dims; ++d) {
        int64_t pr = t % pairs;
        t /= pairs;
        // unrank pair index -> (alpha, beta), alpha < beta <= p
        int64_t a = 0, remaining = pr;
        while (remaining >= G.p - a) {
          remaining -= G.p - a;
          ++a;
        }
        alpha[d] = a;
        beta[d] = a + 1 + remaining;
      }
      best = std::max(best, box_deviation(G, alpha, beta));
    }
    return best;
  }
  if (mode.samples < 1)
    throw InvalidConfiguration("discrepancy: sample count must be >= 1");
  std::mt19937_64 rng(mode.seed);
  double best = 0;
  std::vector<int64_t> alpha(G.dims), beta(G.dims);
  for (int64_t it = 0; it < mode.samples; ++it) {
    for (int d = 0; d < G.dims; ++d) {
      alpha[d] = draw(rng, 0, G.p - 1);
      beta[d] = draw(rng, alpha[d] + 1, G.p);
    }
    best = std::max(best, box_deviation(G, alpha, beta));
  }
  return best;
}

}  // namespace

double discrepancy(const Sequence& seq, const BoxMode& mode,
                   const std::vector<int>& coord_subset, bool parallel) {
  return discrepancy_impl(seq, mode, coord_subset, parallel);
}

double discrepancy_serial(const Sequence& seq, const BoxMode& mode,
                          const std::vector<int>& coord_subset) {
  return discrepancy_impl(seq, mode, coord_subset, false);
}

// ---- linear complexity ----

int64_t berlekamp_massey(const FieldSpec& F, const std::vector<Fe>& s) {
  std::vector<Fe> C{F.one()}, B{F.one()};
  int64_t L = 0, m = 1;
  Fe b = F.one();
  for (size_t n = 0; n < s.size(); ++n) {
    Fe d = s[n];
    for (size_t i = 1; i < C.size() && i <= n; ++i)
      d = F.add(d, F.mul(C[i], s[n - i]));
    if (F.is_zero(d)) {
      ++m;
      continue;
    }
    Fe coef = F.mul(d, F.inv(b));
    if (2 * L <= static_cast<int64_t>(n)) {
      std::vector<Fe> T = C;
      if (C.size() < B.size() + m) C.resize(B.size() + m, F.zero());
      for (size_t i = 0; i < B.size(); ++i)
        C[i + m] = F.sub(C[i + m], F.mul(coef, B[i]));
      L = static_cast<int64_t>(n) + 1 - L;
      B = std::move(T);
      b = d;
      m = 1;
    } else {
      if (C.size() < B.size() + m) C.resize(B.size() + m, F.zero());
      for (size_t i = 0; i < B.size(); ++i)
        C[i + m] = F.sub(C[i + m], F.mul(coef, B[i]));
      ++m;
    }
  }
  return L;
}

int64_t linear_complexity(const Sequence& seq) {
  const FieldSpec& F = *seq.field;
  std::vector<Fe> vals;
  vals.reserve(seq.s.size());
  for (const auto& e : seq.s) vals.push_back(e.pole ? F.zero() : e.value);
  return berlekamp_massey(F, vals);
}

std::optional<std::vector<Fe>> shifted_dependency(
    const FieldSpec& F, const std::vector<Fe>& period,
    const std::vector<int64_t>& offsets) {
  int64_t T = static_cast<int64_t>(period.size());
  size_t M = offsets.size();
  // rows: n = 0..T-1, columns i: s_{(n + k_i) mod T}
  std::vector<std::vector<Fe>> rows(static_cast<size_t>(T),
                                    std::vector<Fe>(M, F.zero()));
  for (int64_t n = 0; n < T; ++n)
    for (size_t i = 0; i < M; ++i)
      rows[n][i] = period[static_cast<size_t>((n + offsets[i]) % T)];
  // Gaussian elimination to find a kernel vector.
  std::vector<size_t> pivot_of_col(M, SIZE_MAX);
  size_t rank = 0;
  for (size_t col = 0; col < M && rank < rows.size(); ++col) {
    size_t sel = SIZE_MAX;
    for (size_t r = rank; r < rows.size(); ++r) {
      if (!F.is_zero(rows[r][col])) {
        sel = r;
        break;
      }
    }
    if (sel == SIZE_MAX) continue;
    std::swap(rows[rank], rows[sel]);
    Fe inv = F.inv(rows[rank][col]);
    for (size_t cc = 0; cc < M; ++cc) rows[rank][cc] = F.mul(rows[rank][cc], inv);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && !F.is_zero(rows[r][col])) {
        Fe f = rows[r][col];
        for (size_t cc = 0; cc < M; ++cc)
          rows[r][cc] = F.sub(rows[r][cc], F.mul(f, rows[rank][cc]));
      }
    }
    pivot_of_col[col] = rank;
    ++rank;
  }
  // pick the first free column and back-substitute
  for (size_t col = 0; col < M; ++col) {
    if (pivot_of_col[col] != SIZE_MAX) continue;
    std::vector<Fe> c(M, F.zero());
    c[col] = F.one();
    for (size_t cc = 0; cc < M; ++cc) {
      if (pivot_of_col[cc] == SIZE_MAX) continue;
      c[cc] = F.neg(rows[pivot_of_col[cc]][col]);
    }
    return c;
  }
  return std::nullopt;
}

// ---- lemma verifiers ----

namespace {

// Smallest extension with the full N-torsion rational; -1 if out of budget.
int full_torsion_extension(const Curve& E, int64_t N, int64_t budget) {
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
    if (over) return -1;
    if (E.weil_count(m) % (N * N) != 0) continue;
    if ((qm - 1) % N != 0) continue;
    if (static_cast<int64_t>(E.over(m).torsion_points(N).size()) == N * N)
      return m;
  }
  return -1;
}

std::string ideal_label(const IdealHNF& I) {
  return "(" + std::to_string(I.s) + "," + std::to_string(I.b) + "+" +
         std::to_string(I.c) + "w)";
}

bool ideal_kills(const EndRing& ring, const IdealHNF& I, const Point& Q,
                 const Extension& X, const Point& omega_Q) {
  // (x + y omega) Q for both HNF generators, omega Q precomputed
  if (!X.scalar_mul(I.s, Q).inf) return false;
  Point r = X.add(X.scalar_mul(I.b, Q), X.scalar_mul(I.c, omega_Q));
  (void)ring;
  return r.inf;
}

}  // namespace

LemmaReport verify_torsion_cardinality(const EndRing& ring, const IdealHNF& a,
                                       int64_t budget) {
  const Curve& E = ring.curve();
  const CMOrder& O = ring.order();
  if (!O.is_coprime_to_conductor(a))
    throw ConductorCollision("torsion cardinality: ideal not coprime to u");
  if (!O.coprime(a, ring.inseparable_prime()))
    throw InvalidConfiguration("torsion cardinality: ideal meets (p, pi)");
  if (std::gcd(ring.relative_conductor(), a.s) != 1)
    throw ScaleLimit("torsion cardinality: omega not liftable on this torsion");
  int m = full_torsion_extension(E, a.s, budget);
  if (m < 0) throw ScaleLimit("torsion cardinality: no extension within budget");
  const Extension& X = E.over(m);
  Endomorphism om = ring.from_order_element(O.omega());
  int64_t count = 0;
  for (const auto& Q : X.torsion_points(a.s)) {
    Point oq = Q.inf ? Q : ring.apply(om, Q, X);
    if (ideal_kills(ring, a, Q, X, oq)) ++count;
  }
  LemmaReport rep;
  rep.id = "L2";
  rep.instance = ideal_label(a) + " m=" + std::to_string(m);
  rep.measured = static_cast<double>(count);
  rep.reference = static_cast<double>(a.norm());
  rep.ratio = rep.measured / rep.reference;
  rep.pass = count == a.norm();
  return rep;
}

LemmaReport verify_annihilator_exists(const EndRing& ring, const IdealHNF& a,
                                      int64_t budget) {
  const Curve& E = ring.curve();
  const CMOrder& O = ring.order();
  if (!O.is_coprime_to_conductor(a))
    throw ConductorCollision("annihilator existence: ideal not coprime to u");
  if (std::gcd(ring.relative_conductor(), a.s) != 1)
    throw ScaleLimit("annihilator existence: omega not liftable");
  int m = full_torsion_extension(E, a.s, budget);
  if (m < 0) throw ScaleLimit("annihilator existence: no extension in budget");
  const Extension& X = E.over(m);
  Endomorphism om = ring.from_order_element(O.omega());
  auto divisors = O.divisors_up_to(a, a.norm());
  bool found = false;
  for (const auto& Q : X.torsion_points(a.s)) {
    if (Q.inf) continue;
    Point oq = ring.apply(om, Q, X);
    if (!ideal_kills(ring, a, Q, X, oq)) continue;
    bool proper = false;
    for (const auto& d : divisors) {
      if (d == a) continue;
      if (ideal_kills(ring, d, Q, X, oq)) {
        proper = true;
        break;
      }
    }
    if (!proper) {
      found = true;
      break;
    }
  }
  LemmaReport rep;
  rep.id = "L3";
  rep.instance = ideal_label(a) + " m=" + std::to_string(m);
  rep.measured = found ? 1 : 0;
  rep.reference = 1;
  rep.ratio = rep.measured;
  rep.pass = found;
  return rep;
}

LemmaReport verify_preimage_annihilator(const EndRing& ring,
                                        const Endomorphism& tau, const Point& Q,
                                        int64_t budget) {
  const Curve& E = ring.curve();
  const CMOrder& O = ring.order();
  AnnihilatorIdeal annQ = ring.annihilator(Q);
  OrderElement t = ring.to_order_element(tau);
  OrderElement tgens[1] = {t};
  IdealHNF target = O.ideal_mul(O.ideal_from_generators(tgens), annQ.ideal);

  LemmaReport rep;
  rep.id = "L4";
  rep.instance = "tau=(" + std::to_string(t.x) + "+" + std::to_string(t.y) +
                 "w) ell=" + std::to_string(annQ.ell);
  rep.reference = 1;
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
    const Extension& X = E.over(m);
    Point target_pt = X.make(X.embed(Q.x), X.embed(Q.y));
    bool matched = X.for_each_point_until([&](const Point& R) {
      if (R.inf) return false;
      if (!(ring.apply(tau, R, X) == target_pt)) return false;
      int64_t ord = X.point_order(R);
      if (std::gcd(ring.relative_conductor(), ord) != 1) return false;
      return ring.annihilator_over(R, X) == target;
    });
    if (matched) {
      rep.measured = 1;
      rep.ratio = 1;
      rep.pass = true;
      return rep;
    }
  }
  // an existence claim cannot be refuted by a bounded scan
  throw ScaleLimit("preimage annihilator: no certified preimage within budget");
}

LemmaReport verify_combination_degree(const EndRing& ring,
                                      const std::vector<Endomorphism>& taus,
                                      const std::vector<Fe>& coeffs,
                                      const Observable& f, int m) {
  const Curve& E = ring.curve();
  const FieldSpec& F = E.field();
  const Extension& X = E.over(m);
  int64_t J = 0;
  for (const auto& t : taus) J = std::max(J, ring.endo_norm(t));
  int64_t poles = 0, nonzero = 0;
  X.for_each_point([&](const Point& Q) {
    if (Q.inf) return;
    bool pole = false;
    Fe val = X.field().zero();
    for (size_t i = 0; i < taus.size(); ++i) {
      Point R = ring.apply(taus[i], Q, X);
      if (R.inf) {
        pole = true;
        break;
      }
      Fe fv = f.eval(X.field(), R);
      val = X.field().add(val, X.field().mul(X.embed(coeffs[i]), fv));
    }
    if (pole)
      ++poles;
    else if (!X.field().is_zero(val))
      ++nonzero;
  });
  (void)F;
  double bound = static_cast<double>(taus.size()) * f.pole_degree() *
                 static_cast<double>(J);
  LemmaReport rep;
  rep.id = "L5";
  rep.instance = "s=" + std::to_string(taus.size()) + " J=" + std::to_string(J) +
                 " m=" + std::to_string(m);
  rep.measured = static_cast<double>(poles);
  rep.reference = bound;
  rep.ratio = bound > 0 ? rep.measured / bound : 0;
  rep.pass = nonzero > 0 && static_cast<double>(poles) <= bound;
  return rep;
}

LemmaReport verify_sieve_count(int64_t ell, int64_t J) {
  int64_t count = count_coprime_integers(J, ell);
  int64_t phi = euler_phi_i64(ell);
  LemmaReport rep;
  rep.id = "L6";
  rep.instance = "ell=" + std::to_string(ell) + " J=" + std::to_string(J);
  rep.measured = static_cast<double>(count);
  rep.reference = static_cast<double>(J) * phi / ell;
  rep.ratio = rep.reference > 0 ? rep.measured / rep.reference : 0;
  // calibrated constant 1/2 for J >= sqrt(ell); exact comparison
  rep.pass = 2 * ell * count >= J * phi;
  return rep;
}

LemmaReport verify_lattice_count(const CMOrder& O, const IdealHNF& a, int64_t J) {
  // The stated main term counts elements up to units: the w unit multiples
  // of each nonzero alpha land in the ball together, so the element count
  // is compared against w times the main term.
  int64_t count = O.count_norm_ball(a, J);
  double main = O.norm_ball_main_term(a, J) * O.unit_count();
  LemmaReport rep;
  rep.id = "L7";
  rep.instance = "D=" + std::to_string(O.discriminant()) + " " + ideal_label(a) +
                 " J=" + std::to_string(J);
  rep.exact = false;
  rep.measured = static_cast<double>(count);
  rep.reference = main;
  rep.ratio = main > 0 ? count / main : 0;
  rep.pass = rep.ratio >= 0.9 && rep.ratio <= 1.1;
  return rep;
}

LemmaReport verify_coprime_count(const CMOrder& O, const IdealHNF& a, int64_t J) {
  int64_t direct = O.count_coprime_norm_ball(a, J);
  int64_t moebius = O.count_coprime_norm_ball_mobius(a, J);
  LemmaReport rep;
  rep.id = "L8";
  rep.instance = "D=" + std::to_string(O.discriminant()) + " " + ideal_label(a) +
                 " J=" + std::to_string(J);
  rep.measured = static_cast<double>(direct);
  rep.reference = static_cast<double>(moebius);
  rep.ratio = moebius != 0 ? rep.measured / rep.reference : 1;
  rep.pass = direct == moebius;
  return rep;
}

LemmaReport verify_representation_partition(const CMOrder& O, OrderElement tau,
                                            const IdealHNF& a, int64_t J) {
  auto [lhs, rhs] = O.representation_partition(tau, a, J);
  LemmaReport rep;
  rep.id = "L9";
  rep.instance = "D=" + std::to_string(O.discriminant()) + " " + ideal_label(a) +
                 " J=" + std::to_string(J);
  rep.measured = static_cast<double>(lhs);
  rep.reference = static_cast<double>(rhs);
  rep.ratio = rhs != 0 ? rep.measured / rep.reference : 1;
  rep.pass = lhs == rhs;
  return rep;
}

std::vector<LemmaReport> run_lemma_suite(int64_t budget) {
  std::vector<LemmaReport> out;
  if (budget <= 0) return out;

  // curve-side instances
  FieldSpec F5(5, 1, {0});
  Curve E5(F5, F5.zero(), F5.zero(), F5.zero(), F5.one(), F5.one());
  EndRing R5 = determine_end_ring(E5, budget);
  FieldSpec F7(7, 1, {0});
  Curve E7(F7, F7.zero(), F7.zero(), F7.zero(), F7.one(), F7.from_int(3));
  EndRing R7 = determine_end_ring(E7, budget);

  for (const EndRing* ring : {&R5, &R7}) {
    const CMOrder& O = ring->order();
    IdealHNF P = ring->inseparable_prime();
    for (const auto& a : O.ideals_up_to(9)) {
      if (a.is_unit()) continue;
      if (!O.is_coprime_to_conductor(a)) continue;
      if (!O.coprime(a, P)) continue;
      if (std::gcd(ring->relative_conductor(), a.s) != 1) continue;
      try {
        out.push_back(verify_torsion_cardinality(*ring, a, budget));
        out.push_back(verify_annihilator_exists(*ring, a, budget));
      } catch (const ScaleLimit&) {
        // instance out of reach at this budget; skip
      }
    }
    // L4 on a rational point; try small integral maps until one certifies
    // within budget
    const Extension& X1 = ring->curve().over(1);
    Point Q = X1.infinity();
    X1.for_each_point([&](const Point& R) {
      if (Q.inf && !R.inf) Q = R;
    });
    for (auto [tx, ty] : {std::pair{1, 1}, {2, 1}, {2, 0}, {3, 0}}) {
      Endomorphism tau = ring->make(Rational::of(tx), Rational::of(ty));
      if (!ring->coprime_to_conductor(tau)) continue;
      if (!ring->order().coprime(
              ring->order().principal_ideal(ring->to_order_element(tau)), P))
        continue;
      try {
        out.push_back(verify_preimage_annihilator(*ring, tau, Q, budget));
        break;
      } catch (const ScaleLimit&) {
        // this tau needs a larger extension; try the next
      }
    }
    // L5 with two non-associated maps
    std::vector<Endomorphism> taus{ring->scalar(1),
                                   ring->make(Rational::of(2), Rational::of(1))};
    std::vector<Fe> coeffs{ring->curve().field().one(),
                           ring->curve().field().one()};
    out.push_back(
        verify_combination_degree(*ring, taus, coeffs, Observable::X(), 1));
  }

  for (int64_t ell : {2, 6, 30, 210, 2310, 9699})
    out.push_back(verify_sieve_count(ell, std::max<int64_t>(100, ell)));

  for (int64_t DK : {-4, -7, -8, -11}) {
    CMOrder O(DK, 1);
    out.push_back(verify_lattice_count(O, O.unit_ideal(), 10000));
  }

  for (int64_t DK : {-11, -4, -8}) {
    CMOrder O(DK, 1);
    for (const auto& a : O.ideals_up_to(30)) {
      if (a.is_unit() || !O.is_coprime_to_conductor(a)) continue;
      out.push_back(verify_coprime_count(O, a, 120));
    }
  }

  {
    CMOrder O(-11, 1);
    for (const auto& a : O.ideals_up_to(40)) {
      if (a.is_unit()) continue;
      // first invertible non-unit residue as tau
      OrderElement tau{0, 0};
      bool have = false;
      for (const auto& r : O.invertible_residues(a)) {
        if (r == O.reduce(O.one(), a)) continue;
        tau = r;
        have = true;
        break;
      }
      if (!have) continue;
      out.push_back(verify_representation_partition(O, tau, a, 60));
    }
  }
  return out;
}

}  // namespace ecgen
