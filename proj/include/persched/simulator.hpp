#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "persched/pattern.hpp"

namespace persched {

struct TraceInstance {
  int app = 0;
  int index = 0;  // occurrence number of this app, 0-based
  double compute_start = 0;
  double io_start = 0;
  double io_end = 0;
  double volume = 0;  // GB transferred
  uint32_t seg_begin = 0;
  uint32_t seg_count = 0;
};

// Finite execution of the co-scheduled apps in absolute time. I/O segments
// live in one arena indexed by the instances.
struct Trace {
  std::vector<std::string> app_ids;
  std::vector<double> compute_times;
  std::vector<double> releases;
  std::vector<std::vector<TraceInstance>> instances;  // per app, time order
  std::vector<Segment> segments;                      // absolute start times
  double horizon = 0;
};

// Replicates the pattern n_periods times after a one-period lead-in, so the
// compute phase anchored across the period boundary stays in view. By
// default an app counts as released when its first compute phase starts.
Trace unroll(const Pattern& pattern, int n_periods, const std::vector<double>& releases = {});

// Application efficiency at time t: work of the instances finished by t over
// the time elapsed since the release.
double actual_efficiency(const Trace& trace, size_t k, double t);

struct BaselineAppStats {
  std::string id;
  int completed = 0;          // instances finished before the horizon
  double last_completion = 0; // d_k
  double achieved_rate = 0;   // GB/s averaged over transfer time
  double slowdown = 0;        // 1 - achieved_rate / min(p b, B)
  double efficiency = 0;      // rho_k(d_k)
};

struct BaselineResult {
  Trace trace;
  std::vector<BaselineAppStats> apps;
  double steady_syseff = 0;
};

// No-scheduler reference: every app is released at 0 and alternates compute
// with a full-volume transfer; whenever transfers overlap, each active core
// receives min(b, B / active cores).
BaselineResult fair_share_baseline(const Scenario& scenario, double horizon);

// Feasibility audit: volume conservation, per-app caps, aggregate cap at
// every event boundary, per-app phase ordering.
std::vector<Violation> validate_trace(const Trace& trace, const Scenario& scenario);

}  // namespace persched
