// Compares the serial sweep against the OpenMP sweep and the heap builder
// against the naive reference on the catalog scenarios.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "persched/engine.hpp"
#include "persched/model.hpp"

using namespace persched;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_result(const PerschedResult& a, const PerschedResult& b) {
  return a.pattern.period() == b.pattern.period() && a.metrics.syseff == b.metrics.syseff &&
         a.metrics.dilation == b.metrics.dilation &&
         a.pattern.total_weighted_work() == b.pattern.total_weighted_work();
}

}  // namespace

int main(int argc, char** argv) {
  double kprime = 10.0;
  std::vector<std::string> sets;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--kprime" && i + 1 < argc)
      kprime = std::atof(argv[++i]);
    else
      sets.push_back(arg);
  }
  if (sets.empty())
    for (int i = 1; i <= 10; ++i) sets.push_back("set" + std::to_string(i));

#ifdef _OPENMP
  std::printf("sweep kernel: serial vs OpenMP (%d threads), kprime=%g\n", omp_get_max_threads(),
              kprime);
#else
  std::printf("sweep kernel: built without OpenMP, comparing two serial runs, kprime=%g\n",
              kprime);
#endif
  std::printf("%-6s %12s %12s %8s %10s %10s  %s\n", "set", "serial[s]", "parallel[s]", "speedup",
              "syseff", "dilation", "check");

  bool all_ok = true;
  for (const auto& name : sets) {
    Scenario sc = load_catalog(name);
    EngineConfig cfg;
    cfg.kprime = kprime;

    cfg.threads = 1;
    auto t0 = std::chrono::steady_clock::now();
    PerschedResult serial = run_persched(sc, cfg);
    double t_serial = seconds_since(t0);

    cfg.threads = 0;
    t0 = std::chrono::steady_clock::now();
    PerschedResult parallel = run_persched(sc, cfg);
    double t_parallel = seconds_since(t0);

    bool ok = same_result(serial, parallel);
    all_ok = all_ok && ok;
    std::printf("%-6s %12.3f %12.3f %8.2f %10.4g %10.4g  %s\n", name.c_str(), t_serial,
                t_parallel, t_serial / std::max(t_parallel, 1e-9), serial.metrics.syseff,
                serial.metrics.dilation, ok ? "identical" : "MISMATCH");

    // Heap builder vs the exhaustive reference at the chosen period.
    Pattern heap = build_pattern(sc, serial.t_opt_sweep, cfg);
    Pattern naive = build_pattern_naive(sc, serial.t_opt_sweep, cfg);
    if (heap.total_weighted_work() != naive.total_weighted_work() ||
        heap.syseff() != naive.syseff()) {
      std::printf("  heap/naive builder mismatch at T=%g\n", serial.t_opt_sweep);
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}
