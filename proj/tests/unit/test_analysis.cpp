#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ecgen/analysis.hpp"
#include "ecgen/search.hpp"
#include "oracles.hpp"

using namespace ecgen;

namespace {

struct Fixture {
  std::unique_ptr<Curve> E;
  std::unique_ptr<EndRing> ring;

  Fixture() {
    FieldSpec F(5, 1, {0});
    E = std::make_unique<Curve>(F, F.zero(), F.zero(), F.zero(), F.one(),
                                F.one());
    ring = std::make_unique<EndRing>(determine_end_ring(*E));
  }

  Point generator_point() const {
    const Extension& X = E->over(1);
    for (const auto& P : X.points())
      if (!P.inf && X.point_order(P) == 9) return P;
    throw Error("no generator point");
  }
};

Sequence synthetic(const FieldSpec& F, const std::vector<int64_t>& idx) {
  Sequence s;
  s.field = &F;
  for (int64_t i : idx) s.s.push_back({false, F.from_index(i)});
  return s;
}

}  // namespace

TEST_CASE("exp_sum basics") {
  Fixture fx;
  Point P = fx.generator_point();
  // constant sequence: S = T' psi(f(P))
  Generator g(*fx.ring, fx.ring->scalar(1), P);
  auto S = exp_sum(g, Observable::X(), 1, 7);
  const FieldSpec& F = fx.E->field();
  auto expected = 7.0 * F.additive_character(P.x, 1);
  CHECK(std::abs(S - expected) < 1e-9);

  Generator g2(*fx.ring, fx.ring->make(Rational::of(2), Rational::of(1)), P);
  int64_t T = g2.period();
  auto S2 = exp_sum(g2, Observable::X(), 1, T);
  CHECK(std::abs(S2) <= static_cast<double>(T) + 1e-9);

  // full-orbit sum equals the point-by-point sum over the orbit set,
  // accumulated in sorted key order
  const Extension& X1 = fx.E->over(1);
  std::vector<Point> orbit;
  for (int64_t n = 1; n <= T; ++n) orbit.push_back(g2.point_at(n));
  std::sort(orbit.begin(), orbit.end(), [&](const Point& A, const Point& B) {
    return X1.key(A) < X1.key(B);
  });
  std::complex<double> direct = 0;
  for (const auto& Q : orbit)
    if (!Q.inf) direct += F.additive_character(Observable::X().eval(F, Q), 1);
  CHECK(std::abs(S2 - direct) < 1e-9);

  // cyclic shift of the starting index keeps the full-period sum
  Generator g3 = g2;
  g3.next();
  auto S3 = exp_sum(g3, Observable::X(), 1, T);
  CHECK(std::abs(S2 - S3) < 1e-9);
}

TEST_CASE("subgroup character sums") {
  Fixture fx;
  const FieldSpec& F = fx.E->field();
  std::vector<Fe> c1{F.one()};
  std::vector<Endomorphism> t1{fx.ring->scalar(1)};

  SubgroupSpec trivial{SubgroupKind::Trivial, {}};
  auto s0 = subgroup_char_sum(*fx.ring, trivial, Observable::X(), 1, c1, t1);
  CHECK(std::abs(s0) < 1e-12);  // x has its pole at infinity

  SubgroupSpec full{SubgroupKind::Full, {}};
  auto s1 = subgroup_char_sum(*fx.ring, full, Observable::X(), 1, c1, t1);
  CHECK(std::abs(s1) <= single_function_char_sum_bound(2, 5) + 1e-9);

  SubgroupSpec span{SubgroupKind::EndoSpan, fx.generator_point()};
  auto s2 = subgroup_char_sum(*fx.ring, span, Observable::X(), 1, c1, t1);
  CHECK(std::abs(s2) <= single_function_char_sum_bound(2, 5) + 1e-9);

  // validation: zero coefficients, associated maps, frobenius-power ratios
  std::vector<Fe> zero{F.zero()};
  CHECK_THROWS_AS((void)subgroup_char_sum(*fx.ring, full, Observable::X(), 1,
                                          zero, t1),
                  InvalidConfiguration);
  std::vector<Fe> c2{F.one(), F.one()};
  std::vector<Endomorphism> assoc{fx.ring->scalar(2), fx.ring->scalar(-2)};
  CHECK_THROWS_AS((void)subgroup_char_sum(*fx.ring, full, Observable::X(), 1,
                                          c2, assoc),
                  InvalidConfiguration);
  std::vector<Endomorphism> piratio{fx.ring->scalar(1),
                                    fx.ring->frobenius_endo()};
  CHECK_THROWS_AS((void)subgroup_char_sum(*fx.ring, full, Observable::X(), 1,
                                          c2, piratio),
                  InvalidConfiguration);
}

TEST_CASE("bound evaluators at hand-checked parameter points") {
  // nu = 1: T^{1/6} ell^{4/3} q^{1/12}
  BoundParams P;
  P.nu = 1;
  P.deg_f = 2;
  P.T = 64;       // 2^6
  P.ell = 8;      // 2^3 -> ell^{4/3} = 16
  P.q = 4096;     // 2^12 -> q^{1/12} = 2
  P.norm_ann = 64;
  P.abs_D_E = 16;
  CHECK(bound_theorem1(P) == doctest::Approx(2 * 2 * 16 * 2).epsilon(1e-12));

  // nu = 2: T^{1/2} ell^{3/4} q^{1/16}
  BoundParams P2 = P;
  P2.nu = 2;
  P2.T = 16;      // -> 4
  P2.ell = 16;    // -> 8
  P2.q = 65536;   // -> 2
  CHECK(bound_theorem1(P2) == doctest::Approx(2 * 4 * 8 * 2).epsilon(1e-12));

  // theorem 2 at nu = 1: max(deg |D|^{1/8} T^{1/4} n^{1/2} q^{1/8},
  //                          deg |D| T^{1/2} q^{1/4})
  BoundParams P3;
  P3.nu = 1;
  P3.deg_f = 2;
  P3.abs_D_E = 256;  // 2^8 -> first factor 2, second 256
  P3.T = 16;
  P3.norm_ann = 4;
  P3.q = 256;
  double first = 2 * 2 * 2 * 2 * 2;           // 32
  double second = 2 * 256 * 4 * 4;            // 8192
  CHECK(bound_theorem2(P3) == doctest::Approx(std::max(first, second)).epsilon(1e-12));

  // theorem 3: max(T / (ell^{4/3} deg^{1/3}),
  //                T / (|D|^{5/4} n^{1/2} deg^{5/4}))
  BoundParams P4;
  P4.T = 1024;
  P4.ell = 8;
  P4.deg_f = 8;
  P4.abs_D_E = 16;
  P4.norm_ann = 64;
  double b1 = 1024.0 / (16 * 2);
  double b2 = 1024.0 / (32 * 8 * std::pow(8, 1.25));
  CHECK(bound_theorem3(P4) == doctest::Approx(std::max(b1, b2)).epsilon(1e-12));

  CHECK_THROWS_AS((void)bound_theorem1(BoundParams{.nu = 0}), InvalidConfiguration);
}

TEST_CASE("theorem-1 exponent flattens as nu grows") {
  auto texp = [](double nu) { return (3 * nu + 2) / (2 * nu * (nu + 2)); };
  for (int nu = 1; nu < 12; ++nu) CHECK(texp(nu + 1) < texp(nu));
  CHECK(texp(1000) < 0.002);
  // with dominant T the bound becomes monotone in nu
  BoundParams P;
  P.T = 1e9;
  P.ell = 4;
  P.q = 16;
  P.nu = 1;
  double prev = bound_theorem1(P);
  for (int nu = 2; nu <= 6; ++nu) {
    P.nu = nu;
    double cur = bound_theorem1(P);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("discrepancy on synthetic inputs") {
  FieldSpec F(5, 1, {0});
  BoxMode all{true, 0, 0};

  // constant sequence: sup over boxes = T (1 - 1/q)
  Sequence constant = synthetic(F, std::vector<int64_t>(20, 3));
  CHECK(discrepancy(constant, all) == doctest::Approx(20 * (1 - 0.2)));

  // one full pass over the field is perfectly equidistributed
  Sequence uniform = synthetic(F, {0, 1, 2, 3, 4});
  CHECK(discrepancy(uniform, all) == doctest::Approx(0.0));

  // sampled mode never exceeds the exact supremum
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<int64_t> vals;
    for (int i = 0; i < 60; ++i) vals.push_back(static_cast<int64_t>(rng() % 5));
    Sequence s = synthetic(F, vals);
    double exact = discrepancy(s, all);
    BoxMode sample{false, 50, rng()};
    CHECK(discrepancy(s, sample) <= exact + 1e-12);
  }

  // parallel and serial box sweeps agree exactly
  FieldSpec F11(11, 1, {0});
  std::vector<int64_t> vals;
  for (int i = 0; i < 500; ++i) vals.push_back((i * i + 3 * i) % 11);
  Sequence s11 = synthetic(F11, vals);
  CHECK(discrepancy(s11, all) == discrepancy_serial(s11, all));

  // poles are dropped from both the counts and the length
  Sequence with_poles = synthetic(F, {0, 1, 2, 3, 4});
  with_poles.s.push_back({true, {}});
  CHECK(discrepancy(with_poles, all) == doctest::Approx(0.0));
}

TEST_CASE("discrepancy coordinate projection for k = 2") {
  FieldSpec F(5, 2, {2, 0});
  std::vector<int64_t> vals;
  for (int i = 0; i < 25; ++i) vals.push_back(i);  // one full pass
  Sequence s = synthetic(F, vals);
  BoxMode all{true, 0, 0};
  CHECK(discrepancy(s, all) == doctest::Approx(0.0));
  CHECK(discrepancy(s, all, {0}) == doctest::Approx(0.0));
  CHECK(discrepancy(s, all, {1}) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)discrepancy(s, all, {2}), InvalidConfiguration);
}

TEST_CASE("berlekamp-massey corner cases and oracle equivalence") {
  FieldSpec F7(7, 1, {0});
  std::vector<Fe> zeros(10, F7.zero());
  CHECK(berlekamp_massey(F7, zeros) == 0);

  std::vector<Fe> impulse(10, F7.zero());
  impulse.back() = F7.one();
  CHECK(berlekamp_massey(F7, impulse) == 10);

  std::mt19937_64 rng(77);
  for (int t = 0; t < 150; ++t) {
    int64_t n = 1 + static_cast<int64_t>(rng() % 40);
    std::vector<Fe> s;
    for (int64_t i = 0; i < n; ++i)
      s.push_back(F7.from_index(static_cast<int64_t>(rng() % 7)));
    CHECK(berlekamp_massey(F7, s) == oracles::min_lfsr_length(F7, s));
  }

  // extending a sequence by its own recurrence leaves L unchanged
  FieldSpec F5(5, 1, {0});
  for (int t = 0; t < 25; ++t) {
    int64_t L0 = 1 + static_cast<int64_t>(rng() % 5);
    std::vector<Fe> coef, s;
    for (int64_t i = 0; i < L0; ++i)
      coef.push_back(F5.from_index(static_cast<int64_t>(rng() % 5)));
    for (int64_t i = 0; i < L0; ++i)
      s.push_back(F5.from_index(static_cast<int64_t>(rng() % 5)));
    for (int64_t i = L0; i < 6 * L0; ++i) {
      Fe acc = F5.zero();
      for (int64_t j = 0; j < L0; ++j)
        acc = F5.add(acc, F5.mul(coef[j], s[i - L0 + j]));
      s.push_back(acc);
    }
    std::vector<Fe> prefix(s.begin(), s.begin() + 4 * L0);
    CHECK(berlekamp_massey(F5, s) == berlekamp_massey(F5, prefix));
  }
}

TEST_CASE("linear complexity treats poles as zero") {
  FieldSpec F(5, 1, {0});
  Sequence s = synthetic(F, {1, 2, 3});
  s.s.push_back({true, F.from_int(4)});  // the stored value must be ignored
  std::vector<Fe> expl{F.from_int(1), F.from_int(2), F.from_int(3), F.zero()};
  CHECK(linear_complexity(s) == berlekamp_massey(F, expl));
}

TEST_CASE("shifted dependency exists above the linear complexity") {
  Fixture fx;
  Point P = fx.generator_point();
  Generator g(*fx.ring, fx.ring->make(Rational::of(2), Rational::of(1)), P);
  int64_t T = g.period();
  Sequence seq = g.emit(Observable::X(), T);
  std::vector<Fe> period;
  const FieldSpec& F = fx.E->field();
  for (const auto& e : seq.s) period.push_back(e.pole ? F.zero() : e.value);
  // the true complexity of the periodic stream via a doubled window
  std::vector<Fe> doubled = period;
  doubled.insert(doubled.end(), period.begin(), period.end());
  int64_t L = berlekamp_massey(F, doubled);
  REQUIRE(L + 1 <= T);
  std::vector<int64_t> offsets;
  for (int64_t i = 0; i <= L; ++i) offsets.push_back(i);
  auto dep = shifted_dependency(F, period, offsets);
  REQUIRE(dep.has_value());
  bool nonzero = false;
  for (const auto& c : *dep)
    if (!F.is_zero(c)) nonzero = true;
  CHECK(nonzero);
  // and it annihilates every cyclic shift
  for (int64_t n = 0; n < T; ++n) {
    Fe acc = F.zero();
    for (size_t i = 0; i < offsets.size(); ++i)
      acc = F.add(acc, F.mul((*dep)[i], period[(n + offsets[i]) % T]));
    CHECK(F.is_zero(acc));
  }
}

TEST_CASE("lemma verifier corpus passes at a small budget") {
  auto reports = run_lemma_suite(400000);
  CHECK(reports.size() > 100);
  for (const auto& r : reports) {
    INFO(r.id, " ", r.instance);
    CHECK(r.pass);
  }
}
