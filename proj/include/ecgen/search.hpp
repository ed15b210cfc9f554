#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecgen/endo.hpp"

namespace ecgen {

enum class SearchWant { FullTorsion, Inert, Split, MaxPeriod };

struct SearchCriteria {
  int64_t q_min = 2;
  int64_t q_max = 200;  // scan cap; the CLI rejects q_max > 500
  int64_t ell = 2;
  SearchWant want = SearchWant::MaxPeriod;
  // Curves per field: exhaustive when q <= exhaustive_cap, otherwise a
  // deterministic seeded sample of this size.
  int64_t per_q_sample = 200;
  int64_t exhaustive_cap = 13;
  uint64_t seed = 20170001;
  int64_t budget = kEnumBudget;
  size_t max_results = 8;
};

// Everything needed to rebuild the instance from text.
struct SearchHit {
  int64_t p = 0;
  int k = 1;
  std::vector<int64_t> modulus;
  std::vector<std::vector<int64_t>> coeffs;  // a1, a2, a3, a4, a6
  std::vector<int64_t> Px, Py;
  int64_t tau_xn = 1, tau_xd = 1, tau_yn = 0, tau_yd = 1;
  int64_t ell = 0, T = 0, norm_ann = 0;
  int64_t trace = 0, v = 0, u = 0, D_K = 0, D_E = 0;
  std::string note;

  std::string describe() const;
};

// All prime powers p^k in [lo, hi], ascending.
std::vector<std::pair<int64_t, int>> prime_powers(int64_t lo, int64_t hi);

std::vector<SearchHit> search_instances(const SearchCriteria& c);

// Rebuild the curve / ring / point / tau of a hit. The curve lives behind
// a stable pointer because the ring and points refer back into it.
struct RebuiltInstance {
  std::unique_ptr<Curve> curve;
  EndRing ring;
  Point P;
  Endomorphism tau;
};
RebuiltInstance rebuild(const SearchHit& hit, int64_t budget = kEnumBudget);

}  // namespace ecgen
