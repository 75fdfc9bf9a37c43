#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "persched/common.hpp"

namespace persched {

struct CapacityExceededError : std::runtime_error {
  double at_time;
  explicit CapacityExceededError(double t)
      : std::runtime_error("aggregate bandwidth cap exceeded at t=" + std::to_string(t)),
        at_time(t) {}
};

// One I/O allocation: `rate` GB/s (aggregate over the owning app's cores)
// from `start` (in [0, T)) for `duration` seconds. May wrap past T.
struct Segment {
  double start = 0;
  double duration = 0;
  double rate = 0;
};

// Cyclic interval of `length` seconds starting at `start` in [0, T).
struct CyclicWindow {
  double start = 0;
  double length = 0;
};

// Outcome of water-filling a volume into a window.
struct FillResult {
  bool feasible = false;
  std::vector<Segment> segments;  // traversal order
  double lead = 0;    // window start -> first transfer
  double span = 0;    // first transfer -> end of last transfer
  double filled = 0;  // GB allocated
};

// Cyclic piecewise-constant aggregate bandwidth usage on [0, T), bounded by
// the platform capacity. Pieces are right-open; a breakpoint at 0 always
// exists and interior pieces with equal values are merged.
class StepProfile {
 public:
  StepProfile(double period, double capacity);

  double period() const { return period_; }
  double capacity() const { return capacity_; }
  size_t piece_count() const { return pieces_.size(); }

  double used_at(double t) const;
  double residual_at(double t) const;

  std::vector<std::pair<double, double>> pieces() const;  // (start, used bw)
  const std::map<double, double>& piece_map() const { return pieces_; }

  // Event times of the residual inside the window, including both window
  // endpoints, unwrapped so they ascend from w.start to w.start + w.length.
  std::vector<double> events_in(const CyclicWindow& w) const;

  // Exact integral of min(cap, residual(t)) dt over the window.
  double integrate_capped(const CyclicWindow& w, double cap) const;

  // Earliest-first allocation of `volume` at rate min(cap, residual) per
  // event interval. Infeasible (not a fault) when the window cannot carry
  // the volume, up to the relative completion tolerance.
  FillResult greedy_fill(const CyclicWindow& w, double cap, double volume) const;

  StepProfile add_usage(const std::vector<Segment>& segments) const;
  StepProfile remove_usage(const std::vector<Segment>& segments) const;
  void add_usage_in_place(const std::vector<Segment>& segments);
  void remove_usage_in_place(const std::vector<Segment>& segments);

  bool approx_equal(const StepProfile& other, double rate_tol = 1e-9) const;

 private:
  void apply(const std::vector<Segment>& segments, double sign);
  void apply_linear(double a, double b, double delta, bool check_cap);
  double ensure_breakpoint(double t);
  void merge_equal_in(double a, double b);

  double period_;
  double capacity_;
  std::map<double, double> pieces_;  // piece start -> used bandwidth
};

}  // namespace persched
