#include <doctest.h>

#include <numeric>
#include <random>

#include "ecgen/cm_order.hpp"

using namespace ecgen;

TEST_CASE("element arithmetic and norms") {
  CMOrder O(-11, 1);
  CHECK(O.norm(O.one()) == 1);
  // omega * conj(omega) = (121 + 11)/4
  CHECK(O.norm(O.omega()) == 33);
  CHECK(O.conj(O.conj(O.omega())) == O.omega());
  CHECK(O.mul(O.omega(), O.conj(O.omega())) == OrderElement{33, 0});

  std::mt19937_64 rng(11);
  for (int t = 0; t < 10000; ++t) {
    OrderElement a{static_cast<int64_t>(rng() % 41) - 20,
                   static_cast<int64_t>(rng() % 41) - 20};
    OrderElement b{static_cast<int64_t>(rng() % 41) - 20,
                   static_cast<int64_t>(rng() % 41) - 20};
    CHECK(O.norm(O.mul(a, b)) == O.norm(a) * O.norm(b));
    CHECK(O.norm(a) >= 0);
  }
}

TEST_CASE("unit groups by discriminant") {
  CHECK(CMOrder(-3, 1).unit_count() == 6);
  CHECK(CMOrder(-4, 1).unit_count() == 4);
  CHECK(CMOrder(-11, 1).unit_count() == 2);
  CHECK(CMOrder(-3, 2).unit_count() == 2);  // discriminant -12
  CHECK(CMOrder(-4, 1).associated({0, 1}, {-2, -1}));  // omega vs -omega
}

TEST_CASE("discriminant validation") {
  CHECK_THROWS_AS(CMOrder(-5, 1), InvalidConfiguration);   // -5 = 3 mod 4
  CHECK_THROWS_AS(CMOrder(-9, 1), InvalidConfiguration);   // not fundamental
  CHECK_THROWS_AS(CMOrder(-12, 1), InvalidConfiguration);  // -12 = 4*(-3)
  CHECK_THROWS_AS(CMOrder(5, 1), InvalidConfiguration);
}

TEST_CASE("ideal HNF basics") {
  CMOrder O(-11, 1);
  IdealHNF a = O.principal_ideal(O.omega());
  CHECK(a.norm() == 33);
  CHECK(O.ideal_mul(a, O.unit_ideal()) == a);
  CHECK(O.ideal_is_valid(a));
  CHECK(!O.ideal_is_valid(IdealHNF{5, 1, 1}));  // not omega-closed

  IdealHNF six = O.scalar_ideal(6);
  CHECK(O.contains(six, {6, 0}));
  for (int64_t t = 1; t < 6; ++t) CHECK(!O.contains(six, {t, 0}));
}

TEST_CASE("ideal product associativity and conjugate norm") {
  CMOrder O(-11, 1);
  auto ideals = O.ideals_up_to(18);
  REQUIRE(ideals.size() > 4);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    const IdealHNF& A = ideals[rng() % ideals.size()];
    const IdealHNF& B = ideals[rng() % ideals.size()];
    const IdealHNF& C = ideals[rng() % ideals.size()];
    CHECK(O.ideal_mul(O.ideal_mul(A, B), C) == O.ideal_mul(A, O.ideal_mul(B, C)));
    CHECK(O.ideal_mul(A, B) == O.ideal_mul(B, A));
    // a * conj(a) = (n(a)) for invertible ideals
    CHECK(O.ideal_mul(A, O.conj_ideal(A)) == O.scalar_ideal(A.norm()));
  }
}

TEST_CASE("norm multiplicativity for ideals coprime to the conductor") {
  CMOrder O(-3, 2);  // discriminant -12, conductor 2
  auto ideals = O.ideals_up_to(30);
  int checked = 0;
  for (const auto& A : ideals) {
    if (!O.is_coprime_to_conductor(A)) continue;
    for (const auto& B : ideals) {
      if (!O.is_coprime_to_conductor(B)) continue;
      CHECK(O.ideal_mul(A, B).norm() == A.norm() * B.norm());
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("residue arithmetic") {
  CMOrder O(-11, 1);
  IdealHNF a{9, 3, 1};
  REQUIRE(O.ideal_is_valid(a));
  CHECK(O.residues(a).size() == 9);
  OrderElement r = O.reduce({14, 3}, a);
  CHECK(r.y == 0);
  CHECK(O.contains(a, O.sub({14, 3}, r)));
  // inverse and order
  for (const auto& rho : O.invertible_residues(a)) {
    OrderElement inv = O.inverse_mod(rho, a);
    CHECK(O.reduce(O.mul(rho, inv), a) == O.reduce(O.one(), a));
  }
  CHECK_THROWS_AS((void)O.inverse_mod({3, 0}, O.scalar_ideal(9)), NotInvertible);
}

TEST_CASE("multiplicative functions") {
  CMOrder O(-11, 1);
  CHECK(O.phi(O.unit_ideal()) == 1);
  CHECK(O.mobius(O.unit_ideal()) == 1);
  CHECK(O.prime_divisor_count(O.unit_ideal()) == 0);

  // oracle: phi((t)) equals the number of invertible residues, t <= 13
  for (int64_t t : {2, 3, 5, 7, 11, 13}) {
    IdealHNF tt = O.scalar_ideal(t);
    int64_t scan = static_cast<int64_t>(O.invertible_residues(tt).size());
    CHECK(O.phi(tt) == scan);
    int sym = CMOrder::kronecker(-11, t);
    if (sym == -1) CHECK(O.phi(tt) == t * t - 1);
    if (sym == 1) CHECK(O.phi(tt) == (t - 1) * (t - 1));
    if (sym == 0) CHECK(O.phi(tt) == t * (t - 1));
  }

  // mobius signs
  auto ps = O.primes_above(3);  // split in -11
  REQUIRE(ps.size() == 2);
  CHECK(O.mobius(ps[0].prime) == -1);
  CHECK(O.mobius(O.ideal_mul(ps[0].prime, ps[0].prime)) == 0);
  CHECK(O.mobius(O.scalar_ideal(3)) == 1);

  // inequality chain against the rational functions
  for (const auto& a : O.ideals_up_to(60)) {
    if (a.is_unit()) continue;
    int64_t n = a.norm();
    int omega_rational = static_cast<int>(factor_integer(n).size());
    CHECK(O.prime_divisor_count(a) <= 2 * omega_rational);
    int64_t phi_n = euler_phi_i64(n);
    // phi_K(a) >= n * (phi(n)/n)^2, kept in integers
    CHECK(O.phi(a) * n * n >= n * phi_n * phi_n);
  }

  CMOrder Ou(-3, 2);
  CHECK_THROWS_AS((void)Ou.factor_ideal(Ou.scalar_ideal(2)), ConductorCollision);
}

TEST_CASE("norm ball counts") {
  CMOrder G(-4, 1);  // Gaussian integers
  CHECK(G.count_norm_ball(G.unit_ideal(), 2) == 8);  // units and 1+i orbit
  CHECK(G.count_norm_ball(G.unit_ideal(), 0) == 0);
  // J below the least norm of the ideal
  IdealHNF three = G.scalar_ideal(3);
  CHECK(G.count_norm_ball(three, 8) == 0);
  CHECK(G.count_norm_ball(three, 9) > 0);

  CMOrder O(-11, 1);
  std::mt19937_64 rng(5);
  auto ideals = O.ideals_up_to(20);
  int64_t prev = -1;
  for (int64_t J = 0; J <= 50; J += 5) {
    int64_t c = O.count_norm_ball(O.unit_ideal(), J);
    CHECK(c >= prev);
    prev = c;
  }
  for (int t = 0; t < 40; ++t) {
    const IdealHNF& a = ideals[rng() % ideals.size()];
    int64_t J = static_cast<int64_t>(rng() % 400);
    CHECK(O.count_norm_ball(a, J, true) == O.count_norm_ball_serial(a, J));
    auto elems = O.norm_ball_elements(a, J);
    CHECK(static_cast<int64_t>(elems.size()) == O.count_norm_ball_serial(a, J));
    for (const auto& e : elems) {
      CHECK(O.contains(a, e));
      CHECK(O.norm(e) > 0);
      CHECK(O.norm(e) <= J);
    }
  }
}

TEST_CASE("coprime ball count against the inclusion-exclusion oracle") {
  CMOrder O(-11, 1);
  CHECK(O.count_coprime_norm_ball(O.unit_ideal(), 30) ==
        O.count_norm_ball(O.unit_ideal(), 30));
  auto ideals = O.ideals_up_to(25);
  std::mt19937_64 rng(17);
  int done = 0;
  for (int t = 0; t < 200 && done < 50; ++t) {
    const IdealHNF& a = ideals[rng() % ideals.size()];
    if (!O.is_coprime_to_conductor(a)) continue;
    int64_t J = 1 + static_cast<int64_t>(rng() % 300);
    CHECK(O.count_coprime_norm_ball(a, J) ==
          O.count_coprime_norm_ball_mobius(a, J));
    ++done;
  }
  CHECK(done == 50);
}

TEST_CASE("lattice count main-term ratio") {
  // element count vs w * (2 pi J / (w sqrt|D| n)) at J = 10^4
  for (int64_t DK : {-4, -7, -8, -11}) {
    CMOrder O(DK, 1);
    double main = O.norm_ball_main_term(O.unit_ideal(), 10000) * O.unit_count();
    double ratio = static_cast<double>(O.count_norm_ball(O.unit_ideal(), 10000)) / main;
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 1.1);
  }
}

TEST_CASE("representation counts") {
  CMOrder O(-11, 1);
  IdealHNF a = O.primes_above(3)[0].prime;  // norm 3
  OrderElement tau{0, 0};
  for (const auto& r : O.invertible_residues(a)) {
    if (O.multiplicative_order_mod(r, a) == 2) {
      tau = r;
      break;
    }
  }
  REQUIRE(O.norm(tau) >= 0);
  // J below the least coprime norm: M_rho = 0 for every rho
  for (const auto& rho : O.invertible_residues(a))
    CHECK(O.count_representations(tau, rho, a, 0) == 0);
  // pigeonhole at huge J: the best rho collects at least T pairs
  int64_t J = a.norm() * a.norm() * 4;
  int64_t T = O.multiplicative_order_mod(tau, a);
  int64_t best = 0;
  for (const auto& rho : O.invertible_residues(a))
    best = std::max(best, O.count_representations(tau, rho, a, J));
  CHECK(best >= T);
  // partition identity
  auto [lhs, rhs] = O.representation_partition(tau, a, 37);
  CHECK(lhs == rhs);
  CHECK_THROWS_AS((void)O.count_representations({3, 0}, O.one(), O.scalar_ideal(3), 10),
                  NotInvertible);
}

TEST_CASE("coprime integer count by sieve") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 60; ++t) {
    int64_t ell = 1 + static_cast<int64_t>(rng() % 500);
    int64_t J = static_cast<int64_t>(rng() % 2000);
    int64_t direct = 0;
    for (int64_t x = 1; x <= J; ++x)
      if (std::gcd(x, ell) == 1) ++direct;
    CHECK(count_coprime_integers(J, ell) == direct);
  }
}
