#include <doctest.h>

#include <numeric>

#include "ecgen/endo.hpp"
#include "ecgen/search.hpp"

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

}  // namespace

TEST_CASE("end ring determination on a squarefree frobenius discriminant") {
  Fixture fx;
  CHECK(fx.ring->certified());
  CHECK(fx.ring->conductor() == 1);
  CHECK(fx.ring->discriminant() == -11);
  CHECK(fx.ring->relative_conductor() == 1);
  const CMOrder& O = fx.ring->order();
  CHECK(O.norm(fx.ring->pi()) == 5);
  CHECK(O.trace(fx.ring->pi()) == -3);
  CHECK(fx.ring->inseparable_prime().norm() == 5);
}

TEST_CASE("membership certification in the omega basis") {
  Fixture fx;
  // integral maps are always members
  CHECK_NOTHROW((void)fx.ring->make(Rational::of(2), Rational::of(1)));
  // v_rel = 1 here, so any proper fraction is rejected
  CHECK_THROWS_AS((void)fx.ring->make(Rational::of(1, 2), Rational::of(0)),
                  InvalidConfiguration);
  CHECK_THROWS_AS((void)fx.ring->make(Rational::of(0), Rational::of(1, 3)),
                  InvalidConfiguration);
  // omega <-> pi basis round trip
  Endomorphism om = fx.ring->from_order_element(fx.ring->order().omega());
  CHECK(fx.ring->to_order_element(om) == fx.ring->order().omega());
}

TEST_CASE("apply: identity, frobenius, scalars") {
  Fixture fx;
  const Extension& X = fx.E->over(1);
  Point P = fx.generator_point();
  CHECK(fx.ring->apply(fx.ring->scalar(1), P, X) == P);
  // frobenius fixes rational points
  CHECK(fx.ring->apply(fx.ring->frobenius_endo(), P, X) == P);
  // the power-generator degeneration tau = e
  for (int64_t e = 0; e <= 10; ++e)
    CHECK(fx.ring->apply(fx.ring->scalar(e), P, X) == X.scalar_mul(e, P));
}

TEST_CASE("apply is additive and respects composition") {
  Fixture fx;
  const Extension& X = fx.E->over(2);
  std::vector<Point> pts;
  X.for_each_point_until([&](const Point& P) {
    pts.push_back(P);
    return pts.size() >= 12;
  });
  std::vector<Endomorphism> maps = {
      fx.ring->scalar(2), fx.ring->frobenius_endo(),
      fx.ring->from_order_element({1, 1}), fx.ring->from_order_element({0, 1})};
  for (const auto& tau : maps) {
    for (size_t i = 0; i + 1 < pts.size(); i += 2)
      CHECK(fx.ring->apply(tau, X.add(pts[i], pts[i + 1]), X) ==
            X.add(fx.ring->apply(tau, pts[i], X),
                  fx.ring->apply(tau, pts[i + 1], X)));
  }
  const CMOrder& O = fx.ring->order();
  for (const auto& s : maps)
    for (const auto& t : maps) {
      Endomorphism st = fx.ring->from_order_element(
          O.mul(fx.ring->to_order_element(s), fx.ring->to_order_element(t)));
      for (const auto& P : pts)
        CHECK(fx.ring->apply(st, P, X) ==
              fx.ring->apply(s, fx.ring->apply(t, P, X), X));
    }
}

TEST_CASE("annihilator of a rational point") {
  Fixture fx;
  const Extension& X = fx.E->over(1);
  Point P = fx.generator_point();
  AnnihilatorIdeal ann = fx.ring->annihilator(P);
  CHECK(ann.ell == 9);
  // generic rational point: O/l = Z/ell, so n(l) = ell
  CHECK(ann.ideal.norm() == 9);
  CHECK(ann.ideal.s == 9);
  const CMOrder& O = fx.ring->order();
  // pi - 1 annihilates rational points
  CHECK(O.contains(ann.ideal, O.sub(fx.ring->pi(), O.one())));
  // the lattice is omega-closed
  CHECK(O.ideal_is_valid(ann.ideal));
  // monotonicity under scalar multiples of the point
  for (int64_t k = 2; k <= 5; ++k) {
    Point kP = X.scalar_mul(k, P);
    if (kP.inf) continue;
    AnnihilatorIdeal annk = fx.ring->annihilator(kP);
    CHECK(O.ideal_contains(annk.ideal, ann.ideal));
  }
  CHECK_THROWS_AS((void)fx.ring->annihilator(X.infinity()), InvalidConfiguration);
}

TEST_CASE("multiplicative order: residues and points agree") {
  Fixture fx;
  Point P = fx.generator_point();
  AnnihilatorIdeal ann = fx.ring->annihilator(P);
  CHECK(fx.ring->multiplicative_order(fx.ring->scalar(1), ann) == 1);
  for (auto [x, y] : {std::pair{2, 0}, {2, 1}, {0, 1}, {4, 1}}) {
    Endomorphism tau = fx.ring->make(Rational::of(x), Rational::of(y));
    if (!fx.ring->order().invertible_mod(fx.ring->to_order_element(tau),
                                         ann.ideal))
      continue;
    int64_t Tr = fx.ring->multiplicative_order(tau, ann);
    int64_t Tp = fx.ring->multiplicative_order_points(tau, ann);
    CHECK(Tr == Tp);
    CHECK(Tr <= ann.ideal.norm() - 1);
  }
  // 3 is a zero divisor mod the annihilator of a 9-torsion point
  CHECK_THROWS_AS(
      (void)fx.ring->multiplicative_order(fx.ring->scalar(3), ann),
      NotInvertible);
}

TEST_CASE("endomorphism orbit is a subgroup containing the point") {
  Fixture fx;
  const Extension& X = fx.E->over(1);
  Point P = fx.generator_point();
  auto H = fx.ring->endomorphism_orbit(P);
  CHECK(81 % H.size() == 0);  // #H divides ell^2
  bool has_p = false, has_inf = false;
  for (const auto& Q : H) {
    if (Q == P) has_p = true;
    if (Q.inf) has_inf = true;
  }
  CHECK(has_p);
  CHECK(has_inf);
  // closed under addition
  for (size_t i = 0; i < H.size(); i += 3)
    for (size_t j = 0; j < H.size(); j += 3) {
      Point s = X.add(H[i], H[j]);
      bool found = false;
      for (const auto& Q : H)
        if (Q == s) found = true;
      CHECK(found);
    }
}

TEST_CASE("max-period instance: inert annihilator and division-point path") {
  SearchCriteria c;
  c.ell = 2;
  c.q_max = 13;
  c.max_results = 1;
  auto hits = search_instances(c);
  REQUIRE(hits.size() == 1);
  const SearchHit& h = hits[0];
  CHECK(h.T == 3);  // ell^2 - 1
  CHECK(h.norm_ann == 4);
  CHECK(h.v % 2 == 0);
  CHECK(h.u % 2 == 1);
  CHECK(CMOrder::kronecker(h.D_K, 2) == -1);

  auto inst = rebuild(h);
  const Extension& X1 = inst.curve->over(1);
  CHECK(inst.ring.relative_conductor() % 2 == 0);
  AnnihilatorIdeal ann = inst.ring.annihilator(inst.P);
  CHECK(ann.ideal == inst.ring.order().scalar_ideal(2));
  // the lifting path must refuse: denominator 2 against an order-2 point
  Endomorphism om = inst.ring.from_order_element(inst.ring.order().omega());
  CHECK(inst.ring.denominator(om) % 2 == 0);
  CHECK_THROWS_AS((void)inst.ring.apply(om, inst.P, X1), DenominatorCollision);
  // the division-point evaluation succeeds and is consistent: the value W
  // satisfies v_rel * W = (numerator)(P)
  Point W = inst.ring.apply_via_division(om, inst.P);
  int64_t d = inst.ring.denominator(om);
  int64_t xi = om.x.num * (d / om.x.den);
  int64_t yi = om.y.num * (d / om.y.den);
  Point lhs = X1.scalar_mul(d, W);
  Point rhs = X1.add(X1.scalar_mul(xi, inst.P),
                     X1.scalar_mul(yi, X1.frobenius(inst.P)));
  CHECK(lhs == rhs);
  // orders agree on the rebuilt instance as well
  CHECK(inst.ring.multiplicative_order(inst.tau, ann) == 3);
  CHECK(inst.ring.multiplicative_order_points(inst.tau, ann) == 3);
}

TEST_CASE("conductor descent below v on the q = 7 instances") {
  SearchCriteria c;
  c.ell = 2;
  c.q_max = 13;
  c.max_results = 1;
  auto hits = search_instances(c);
  REQUIRE(!hits.empty());
  // full rational 2-torsion with 2 | v: (pi - a)/2 is certified, u < v
  CHECK(hits[0].v == 2 * hits[0].u);
}

TEST_CASE("uncertified ring refuses exact operations") {
  FieldSpec F(5, 1, {0});
  Curve E(F, F.zero(), F.zero(), F.zero(), F.one(), F.one());
  EndRing interval(E, E.v(), false);
  CHECK(!interval.certified());
  CHECK_THROWS_AS((void)interval.make(Rational::of(1), Rational::of(0)),
                  ScaleLimit);
  const Extension& X = E.over(1);
  CHECK_THROWS_AS((void)interval.annihilator(X.points()[0]), ScaleLimit);
}
