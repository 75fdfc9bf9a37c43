#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace persched {

struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared I/O platform. `num_procs` is the total number of cores available to
// the co-scheduled applications; every core owns an I/O link of `proc_bw`
// GB/s, and the backend file system sustains `total_bw` GB/s overall.
struct Platform {
  int num_procs = 0;
  double proc_bw = 0.0;   // b, GB/s per core
  double total_bw = 0.0;  // B, GB/s aggregate

  void check() const;
};

// One periodic application: `procs` dedicated cores, each instance computes
// for `compute_time` seconds and then writes `io_volume` GB.
struct ApplicationSpec {
  std::string id;
  int procs = 0;
  double compute_time = 0.0;  // w, seconds
  double io_volume = 0.0;     // GB per instance

  void check() const;
};

// Quantities derived from an application and the platform it runs on.
struct DerivedApp {
  double max_rate = 0.0;         // min(procs * b, B), GB/s
  double min_io_time = 0.0;      // io_volume / max_rate, seconds
  double best_efficiency = 0.0;  // w / (w + min_io_time), in (0, 1]
};

// Minimal time to transfer one instance's volume when the app is alone.
double min_io_time(const ApplicationSpec& app, const Platform& platform);

// Efficiency ceiling of the app: compute fraction of an uncontended instance.
double optimal_efficiency(const ApplicationSpec& app, const Platform& platform);

DerivedApp derive(const ApplicationSpec& app, const Platform& platform);

struct Scenario {
  std::string name;
  Platform platform;
  std::vector<ApplicationSpec> apps;

  void check() const;
};

// SysEfficiency upper bound: every app runs at its uncontended efficiency.
double upper_bound_syseff(const Scenario& scenario);

// Built-in scenario catalog ("set1".."set10", plus single-app "raw:<id>"
// entries with the unscaled application parameters, kept for reference).
std::vector<std::string> catalog_names();
Scenario load_catalog(const std::string& name);

}  // namespace persched
