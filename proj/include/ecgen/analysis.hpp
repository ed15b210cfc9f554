#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecgen/generator.hpp"

namespace ecgen {

// ---- exponential sums ----

// Sum of psi_j over the sequence values; pole entries contribute 0.
// Compensated (Kahan) accumulation keeps the error below 1e-8 for runs of
// ~10^6 unit-modulus terms.
std::complex<double> exp_sum(const Sequence& seq, int64_t j);
// Convenience: clones the generator, emits count terms, sums.
std::complex<double> exp_sum(const Generator& g, const Observable& f, int64_t j,
                             int64_t count);

enum class SubgroupKind { Trivial, Full, EndoSpan };

struct SubgroupSpec {
  SubgroupKind kind = SubgroupKind::Full;
  Point base{};  // EndoSpan: H = {alpha * base}
};

// Sum over Q in H of psi_j(sum_i c_i f(tau_i Q)). Preconditions: the tau_i
// are pairwise non-associated, coprime to the conductor, with ratios that
// are not powers of pi, and the coefficients are not all zero.
std::complex<double> subgroup_char_sum(const EndRing& ring, const SubgroupSpec& H,
                                       const Observable& f, int64_t j,
                                       const std::vector<Fe>& coeffs,
                                       const std::vector<Endomorphism>& taus);

// Explicit single-function bound 2 deg(f) sqrt(q) for the sum above with
// s = 1, tau = 1.
double single_function_char_sum_bound(int deg_f, int64_t q);

// ---- bound evaluators (implied constants set to 1) ----

struct BoundParams {
  int nu = 1;
  double deg_f = 2;
  double T = 1;
  double ell = 1;
  double norm_ann = 1;  // n(l)
  double q = 2;
  double abs_D_E = 3;
  int k = 1;
  int64_t p = 2;
  double epsilon = 0.1;
};

double bound_theorem1(const BoundParams& P);
double bound_theorem2(const BoundParams& P);
double bound_theorem3(const BoundParams& P);
// (log p + 1)^k, the box-to-character-sum conversion factor.
double discrepancy_box_factor(const BoundParams& P);

bool theorem1_hypothesis(const BoundParams& P);   // ell >= q^{1/4+eps}
bool theorem1_nontrivial(const BoundParams& P);   // T >= ell^{4/3} q^{1/6+eps}
bool theorem2_hypothesis(const BoundParams& P);   // n(l) >= q^{1/2+eps}
bool theorem2_nontrivial(const BoundParams& P);
bool theorem3_hypothesis(const BoundParams& P);   // deg f < ell^{2-eps}

// ---- discrepancy ----

struct BoxMode {
  bool all = true;
  int64_t samples = 0;
  uint64_t seed = 0;
};

// Largest deviation of box-hit counts from vol/q * T over basis-coordinate
// boxes prod [alpha_i, beta_i). Pole entries are dropped from both the
// counts and the length. coord_subset (empty = all coordinates) projects
// onto a subset of basis coordinates to keep `all` mode feasible for k >= 2.
double discrepancy(const Sequence& seq, const BoxMode& mode,
                   const std::vector<int>& coord_subset = {},
                   bool parallel = true);
double discrepancy_serial(const Sequence& seq, const BoxMode& mode,
                          const std::vector<int>& coord_subset = {});

// ---- linear complexity ----

// Berlekamp-Massey over F_{p^k}; pole entries enter as 0.
int64_t linear_complexity(const Sequence& seq);
int64_t berlekamp_massey(const FieldSpec& F, const std::vector<Fe>& s);

// Nonzero coefficient vector c with sum_i c_i s_{n+k_i} = 0 for all n,
// indices cyclic over one period. Exists whenever the period satisfies a
// recurrence shorter than the number of offsets.
std::optional<std::vector<Fe>> shifted_dependency(
    const FieldSpec& F, const std::vector<Fe>& period,
    const std::vector<int64_t>& offsets);

// ---- lemma verifiers ----

struct LemmaReport {
  std::string id;
  std::string instance;
  bool exact = true;  // identity check; false = main-term ratio report
  bool pass = false;
  double measured = 0;
  double reference = 0;
  double ratio = 0;
};

// #E[a] over a sufficient extension equals n(a) (ideals coprime to the
// conductor and to the inseparable prime).
LemmaReport verify_torsion_cardinality(const EndRing& ring, const IdealHNF& a,
                                       int64_t budget = kEnumBudget);
// A point with ann(P) = a exists, found by scan.
LemmaReport verify_annihilator_exists(const EndRing& ring, const IdealHNF& a,
                                      int64_t budget = kEnumBudget);
// Some preimage Qbar of Q under tau has ann(Qbar) = tau * ann(Q).
LemmaReport verify_preimage_annihilator(const EndRing& ring,
                                        const Endomorphism& tau, const Point& Q,
                                        int64_t budget = kEnumBudget);
// F = sum c_i f(tau_i .) is not identically zero and its rational pole
// count respects s * deg f * J.
LemmaReport verify_combination_degree(const EndRing& ring,
                                      const std::vector<Endomorphism>& taus,
                                      const std::vector<Fe>& coeffs,
                                      const Observable& f, int m);
// Sieve count of integers <= J coprime to ell against J phi(ell)/ell.
LemmaReport verify_sieve_count(int64_t ell, int64_t J);
// Norm-ball count against the 2 pi J / (w sqrt|D| n(a)) main term.
LemmaReport verify_lattice_count(const CMOrder& O, const IdealHNF& a, int64_t J);
// Coprime ball count equals its Moebius inclusion-exclusion evaluation.
LemmaReport verify_coprime_count(const CMOrder& O, const IdealHNF& a, int64_t J);
// Partition identity sum_rho M_rho(J) = T * #{coprime gamma in the ball}.
LemmaReport verify_representation_partition(const CMOrder& O, OrderElement tau,
                                            const IdealHNF& a, int64_t J);

// Built-in desk corpus across all verifiers; budget caps the enumerations.
std::vector<LemmaReport> run_lemma_suite(int64_t budget = kEnumBudget);

}  // namespace ecgen
