// Independent brute-force oracles used by the unit and acceptance suites.
// These deliberately avoid the library's optimized paths.
#pragma once

#include <cstdint>
#include <vector>

#include "ecgen/field.hpp"

namespace oracles {

// Minimal LFSR length by direct consistency search: the least L such that
// some recurrence s_{n+L} = sum c_i s_{n+i} fits every window of the
// sequence. Gaussian elimination over F_q, one system per candidate L.
inline int64_t min_lfsr_length(const ecgen::FieldSpec& F,
                               const std::vector<ecgen::Fe>& s) {
  using ecgen::Fe;
  int64_t N = static_cast<int64_t>(s.size());
  for (int64_t L = 0; L <= N; ++L) {
    int64_t rows = N - L;
    if (rows <= 0) return L;  // no constraints left
    // unknowns c_0..c_{L-1}; row n: sum c_i s_{n+i} = s_{n+L}
    std::vector<std::vector<Fe>> M(rows, std::vector<Fe>(L + 1, F.zero()));
    for (int64_t n = 0; n < rows; ++n) {
      for (int64_t i = 0; i < L; ++i) M[n][i] = s[n + i];
      M[n][L] = s[n + L];
    }
    // forward elimination
    int64_t rank = 0;
    bool inconsistent = false;
    for (int64_t col = 0; col < L && rank < rows; ++col) {
      int64_t sel = -1;
      for (int64_t r = rank; r < rows; ++r) {
        if (!F.is_zero(M[r][col])) {
          sel = r;
          break;
        }
      }
      if (sel < 0) continue;
      std::swap(M[rank], M[sel]);
      Fe inv = F.inv(M[rank][col]);
      for (int64_t c = col; c <= L; ++c) M[rank][c] = F.mul(M[rank][c], inv);
      for (int64_t r = 0; r < rows; ++r) {
        if (r == rank || F.is_zero(M[r][col])) continue;
        Fe f = M[r][col];
        for (int64_t c = col; c <= L; ++c)
          M[r][c] = F.sub(M[r][c], F.mul(f, M[rank][c]));
      }
      ++rank;
    }
    for (int64_t r = rank; r < rows; ++r)
      if (!F.is_zero(M[r][L])) inconsistent = true;
    if (!inconsistent) return L;
  }
  return N;
}

// Point count over the base field by testing the curve equation on every
// (x, y) pair; quadratic in q, used only for tiny fields.
inline int64_t count_points_xy(const ecgen::FieldSpec& F, const ecgen::Fe& a1,
                               const ecgen::Fe& a2, const ecgen::Fe& a3,
                               const ecgen::Fe& a4, const ecgen::Fe& a6) {
  int64_t count = 1;  // infinity
  for (int64_t xi = 0; xi < F.q(); ++xi) {
    ecgen::Fe x = F.from_index(xi);
    for (int64_t yi = 0; yi < F.q(); ++yi) {
      ecgen::Fe y = F.from_index(yi);
      ecgen::Fe lhs = F.add(F.mul(y, y), F.mul(y, F.add(F.mul(a1, x), a3)));
      ecgen::Fe t = F.add(x, a2);
      t = F.add(F.mul(t, x), a4);
      ecgen::Fe rhs = F.add(F.mul(t, x), a6);
      if (lhs == rhs) ++count;
    }
  }
  return count;
}

}  // namespace oracles
