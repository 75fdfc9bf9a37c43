#pragma once

#include <optional>
#include <vector>

#include "persched/pattern.hpp"

namespace persched {

enum class Objective { MaxSysEff, MinDilation };

// Direction of the w/tio tie-break between equally dilated candidates.
enum class TieBreak { Desc, Asc };

struct EngineConfig {
  double kprime = 10.0;   // T_max / T_min
  double epsilon = 0.01;  // geometric growth factor of the trial period
  Objective objective = Objective::MaxSysEff;
  TieBreak tiebreak = TieBreak::Desc;
  int threads = 1;  // sweep parallelism; 0 = all available cores

  void check() const;
};

// Insertion priority: worst dilation first, then the w/tio ratio in the
// configured direction, then the app index.
struct CandidateKey {
  double dilation = kInfiniteDilation;
  double work_ratio = 0;
  size_t index = 0;
};

bool candidate_before(const CandidateKey& a, const CandidateKey& b, TieBreak tiebreak);
CandidateKey candidate_key(const Pattern& pattern, size_t k);

// Water-filling placement of app k's first instance: the io start minimizing
// the transfer span among all residual-profile events, earliest on ties.
std::optional<InstanceSchedule> plan_first_instance(const Pattern& pattern, size_t k);

// Earliest-first fill of one more instance into the free gap after app k's
// last instance. nullopt iff the app is not schedulable.
std::optional<InstanceSchedule> plan_next_instance(const Pattern& pattern, size_t k);

std::optional<InstanceSchedule> plan_insertion(const Pattern& pattern, size_t k);

// Mutating forms; return false when the pattern is unchanged.
bool insert_first_instance(Pattern& pattern, size_t k);
bool insert_in_schedule(Pattern& pattern, size_t k);

// Fills a pattern of the given period by repeatedly inserting an instance of
// the worst-dilation candidate. The heap variant drops an app permanently
// after its first failed insertion (non-schedulability is monotone); the
// naive variant re-tests every app each round and is kept as the reference.
Pattern build_pattern(const Scenario& scenario, double period, const EngineConfig& config);
Pattern build_pattern_naive(const Scenario& scenario, double period, const EngineConfig& config);

// Smallest period that can hold one instance of every app.
double min_feasible_period(const Scenario& scenario);

struct SweepRow {
  double period = 0;
  double syseff = 0;
  double dilation = 0;
  double weighted_work = 0;
};

// Trial periods T_min * (1+eps)^i up to kprime * T_min.
std::vector<double> sweep_periods(const Scenario& scenario, const EngineConfig& config);

// One pattern build per trial period. Iterations are independent and run in
// parallel when config.threads != 1; the result does not depend on threads.
std::vector<SweepRow> sweep_report(const Scenario& scenario, const EngineConfig& config);

struct PerschedResult {
  Pattern pattern;
  ScheduleMetrics metrics;
  double t_min = 0;
  double t_opt_sweep = 0;   // best trial period before refinement
  double sweep_syseff = 0;  // SysEfficiency reached at t_opt_sweep
  double upper_bound = 0;
  double wall_seconds = 0;
};

// Full period search: geometric sweep, objective-driven selection, then the
// shrink loop that trims the period while the instance mix is unchanged.
PerschedResult run_persched(const Scenario& scenario, const EngineConfig& config);

}  // namespace persched
