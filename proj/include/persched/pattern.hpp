#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "persched/model.hpp"
#include "persched/step_profile.hpp"

namespace persched {

// I/O placement of one instance. Segments are kept in traversal order from
// io_start; the transfer may pause (zero-rate holes) and may wrap past T.
struct InstanceSchedule {
  std::vector<Segment> segments;
  double io_start = 0;  // [0, T)
  double span = 0;      // traversal length from io_start to the end of the last segment

  double io_end(double period) const { return wrap_time(io_start + span, period); }
  double volume() const;
};

struct AppSchedule {
  ApplicationSpec app;
  DerivedApp derived;
  std::vector<InstanceSchedule> instances;  // cyclic chain order; [0] is the anchor
};

struct AppMetrics {
  std::string id;
  int instances = 0;            // l_k
  double best_efficiency = 0;   // rho_k
  double periodic_efficiency = 0;  // l_k w_k / T
  double dilation = 0;          // rho_k / periodic efficiency, +inf when l_k == 0
};

struct ScheduleMetrics {
  double period = 0;
  double syseff = 0;
  double dilation = 0;
  std::vector<AppMetrics> apps;
};

struct Violation {
  std::string what;
  std::string app_id;  // empty for global violations
  double time = 0;
};

// A periodic schedule of duration `period`, repeated indefinitely. Compute
// phases are implicit: an instance computes during the cyclic gap that ends
// at its own io_start, anchored at the previous instance's io_end, so
// feasibility per app is "every cyclic gap >= compute_time".
class Pattern {
 public:
  Pattern(const Scenario& scenario, double period);

  double period() const { return period_; }
  const Platform& platform() const { return platform_; }
  const StepProfile& usage() const { return usage_; }
  const std::vector<AppSchedule>& schedules() const { return schedules_; }
  size_t app_count() const { return schedules_.size(); }
  const AppSchedule& schedule(size_t k) const { return schedules_[k]; }

  int instance_count(size_t k) const;
  double periodic_efficiency(size_t k) const;
  double app_dilation(size_t k) const;
  double syseff() const;
  double dilation() const;
  double total_weighted_work() const;  // sum_k p_k l_k w_k
  ScheduleMetrics metrics() const;

  // Free cyclic interval between the last instance's io_end + w and the
  // first instance's io_start - w. nullopt when no instance exists yet or
  // the remaining gap cannot hold the two compute phases.
  std::optional<CyclicWindow> insertion_window(size_t k) const;

  // Whether one more instance of app k fits without moving anything.
  bool is_schedulable(size_t k) const;

  // Appends the instance after app k's last one and superposes its usage.
  void add_instance(size_t k, InstanceSchedule inst);

  std::vector<Violation> validate() const;

  Pattern rotated(double offset) const;

 private:
  double period_;
  Platform platform_;
  std::vector<AppSchedule> schedules_;
  StepProfile usage_;
};

inline constexpr double kInfiniteDilation = std::numeric_limits<double>::infinity();

}  // namespace persched
