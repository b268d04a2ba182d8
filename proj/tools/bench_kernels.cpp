// Timing comparison of the OpenMP kernels against their serial references.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <omp.h>

#include "trex/graph.hpp"
#include "trex/hitting.hpp"
#include "trex/localization.hpp"
#include "trex/spectral.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    const int n = quick ? 120 : 600;
    const int grid_points = quick ? 4000 : 40000;
    const trex::WeightedGraph g = trex::generate(trex::FamilyKind::path, n);
    const trex::SpectralData sd = trex::eigendecompose(g.matrix());
    const Eigen::VectorXd grid = trex::linspace(0.0, 5000.0, grid_points);

    auto t0 = Clock::now();
    const trex::FidelityTrace serial = trex::fidelity_trace_serial(sd, 1, n, grid);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    const trex::FidelityTrace parallel = trex::fidelity_trace(sd, 1, n, grid);
    const double tp = seconds_since(t0);

    const double diff = (serial.values - parallel.values).cwiseAbs().maxCoeff();
    report("fidelity trace", ts, tp);
    std::printf("%-28s max |serial - parallel| = %g\n", "", diff);
  }

  {
    const std::int64_t walks = quick ? 20000 : 400000;
    const trex::WeightedGraph g = trex::generate(trex::FamilyKind::cycle, 12);

    auto t0 = Clock::now();
    const trex::McEstimate serial = trex::mc_hitting_time_serial(g, 1, 7, walks, 42);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    const trex::McEstimate parallel = trex::mc_hitting_time(g, 1, 7, walks, 42);
    const double tp = seconds_since(t0);

    report("monte carlo hitting", ts, tp);
    std::printf("%-28s mean %.6f vs %.6f (must agree exactly: %s)\n", "", serial.mean,
                parallel.mean, serial.mean == parallel.mean ? "yes" : "NO");
  }

  {
    const int seeds = quick ? 4 : 16;
    auto t0 = Clock::now();
    const auto serial = trex::anderson_sweep_serial(31, trex::NoiseModel::Kind::cauchy, 0.06,
                                                    0.002, 1.5, 1, seeds, 1e4);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    const auto parallel =
        trex::anderson_sweep(31, trex::NoiseModel::Kind::cauchy, 0.06, 0.002, 1.5, 1, seeds, 1e4);
    const double tp = seconds_since(t0);

    double diff = 0.0;
    for (int i = 0; i < seeds; ++i)
      diff = std::max(diff, std::abs(serial[i].peak_fidelity - parallel[i].peak_fidelity));
    report("disorder seed sweep", ts, tp);
    std::printf("%-28s max per-seed fidelity diff = %g\n", "", diff);
  }
  return 0;
}
