// Timing harness comparing the OpenMP kernels against their serial
// reference implementations.

#include <omp.h>

#include <cstdio>
#include <cstring>

#include "ecgen/analysis.hpp"
#include "ecgen/io.hpp"

using namespace ecgen;

namespace {

void report(const char* name, double serial, double parallel, bool equal) {
  std::printf("%-28s serial %8.3fs   omp %8.3fs   speedup %5.2fx   %s\n", name,
              serial, parallel, parallel > 0 ? serial / parallel : 0.0,
              equal ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    int64_t p = quick ? 10007 : 999983;
    FieldSpec F(p, 1, {0});
    Curve E(F, F.zero(), F.zero(), F.zero(), F.one(), F.one());
    const Extension& X = E.over(1);
    double t0 = omp_get_wtime();
    int64_t a = X.count_points_serial();
    double t1 = omp_get_wtime();
    int64_t b = X.count_points(true);
    double t2 = omp_get_wtime();
    report("count_points", t1 - t0, t2 - t1, a == b);
  }

  {
    FieldSpec F(5, 1, {0});
    Curve E(F, F.zero(), F.zero(), F.zero(), F.one(), F.one());
    int m = quick ? 7 : 9;  // 5^9 ~ 2e6
    const Extension& X = E.over(m);
    double t0 = omp_get_wtime();
    auto a = X.torsion_points_serial(6);
    double t1 = omp_get_wtime();
    auto b = X.torsion_points(6, true);
    double t2 = omp_get_wtime();
    report("torsion_scan", t1 - t0, t2 - t1, a == b);
  }

  {
    CMOrder O(-11, 1);
    int64_t J = quick ? 50'000'000 : 2'000'000'000;
    double t0 = omp_get_wtime();
    int64_t a = O.count_norm_ball_serial(O.unit_ideal(), J);
    double t1 = omp_get_wtime();
    int64_t b = O.count_norm_ball(O.unit_ideal(), J, true);
    double t2 = omp_get_wtime();
    report("norm_ball_count", t1 - t0, t2 - t1, a == b);
  }

  {
    // synthetic residue stream over F_113
    FieldSpec F(113, 1, {0});
    Sequence seq;
    seq.field = &F;
    int64_t n = quick ? 20'000 : 200'000;
    uint64_t state = 88172645463325252ull;
    for (int64_t i = 0; i < n; ++i) {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      seq.s.push_back({false, F.from_int(static_cast<int64_t>(state % 113))});
    }
    BoxMode mode;
    mode.all = true;
    double t0 = omp_get_wtime();
    double a = discrepancy_serial(seq, mode);
    double t1 = omp_get_wtime();
    double b = discrepancy(seq, mode);
    double t2 = omp_get_wtime();
    report("discrepancy_all_boxes", t1 - t0, t2 - t1, a == b);
  }

  return 0;
}
