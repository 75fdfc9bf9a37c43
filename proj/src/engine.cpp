#include "persched/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "persched/placement.hpp"

namespace persched {

void EngineConfig::check() const {
  if (!(kprime >= 1.0)) throw std::invalid_argument("config: kprime must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("config: epsilon must be in (0, 1)");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

bool candidate_before(const CandidateKey& a, const CandidateKey& b, TieBreak tiebreak) {
  if (a.dilation != b.dilation) return a.dilation > b.dilation;
  if (a.work_ratio != b.work_ratio)
    return tiebreak == TieBreak::Desc ? a.work_ratio > b.work_ratio
                                      : a.work_ratio < b.work_ratio;
  return a.index < b.index;
}

CandidateKey candidate_key(const Pattern& pattern, size_t k) {
  const auto& s = pattern.schedule(k);
  double ratio = s.derived.min_io_time > 0
                     ? s.app.compute_time / s.derived.min_io_time
                     : kInfiniteDilation;
  return {pattern.app_dilation(k), ratio, k};
}

std::optional<InstanceSchedule> plan_first_instance(const Pattern& pattern, size_t k) {
  const auto& s = pattern.schedule(k);
  const double period = pattern.period();
  const double max_span = period - s.app.compute_time;
  if (s.app.io_volume <= 0) {
    if (max_span < -time_tol(period)) return std::nullopt;
    return InstanceSchedule{{}, 0.0, 0.0};
  }
  auto fit = detail::best_first_fit(pattern.usage(), s.derived.max_rate, s.app.io_volume,
                                    max_span);
  if (!fit) return std::nullopt;
  return InstanceSchedule{std::move(fit->fill.segments), fit->start, fit->span};
}

std::optional<InstanceSchedule> plan_next_instance(const Pattern& pattern, size_t k) {
  const auto& s = pattern.schedule(k);
  auto win = pattern.insertion_window(k);
  if (!win) return std::nullopt;
  if (s.app.io_volume <= 0) return InstanceSchedule{{}, win->start, 0.0};
  auto fill = pattern.usage().greedy_fill(*win, s.derived.max_rate, s.app.io_volume);
  if (!fill.feasible || fill.segments.empty()) return std::nullopt;
  double io_start = wrap_time(win->start + fill.lead, pattern.period());
  return InstanceSchedule{std::move(fill.segments), io_start, fill.span};
}

std::optional<InstanceSchedule> plan_insertion(const Pattern& pattern, size_t k) {
  return pattern.instance_count(k) == 0 ? plan_first_instance(pattern, k)
                                        : plan_next_instance(pattern, k);
}

bool insert_first_instance(Pattern& pattern, size_t k) {
  auto inst = plan_first_instance(pattern, k);
  if (!inst) return false;
  pattern.add_instance(k, std::move(*inst));
  return true;
}

bool insert_in_schedule(Pattern& pattern, size_t k) {
  auto inst = plan_next_instance(pattern, k);
  if (!inst) return false;
  pattern.add_instance(k, std::move(*inst));
  return true;
}

Pattern build_pattern(const Scenario& scenario, double period, const EngineConfig& config) {
  Pattern pattern(scenario, period);
  auto worse = [&config](const CandidateKey& a, const CandidateKey& b) {
    return candidate_before(b, a, config.tiebreak);
  };
  std::priority_queue<CandidateKey, std::vector<CandidateKey>, decltype(worse)> heap(worse);
  for (size_t k = 0; k < pattern.app_count(); ++k) heap.push(candidate_key(pattern, k));
  while (!heap.empty()) {
    size_t k = heap.top().index;
    heap.pop();
    auto inst = plan_insertion(pattern, k);
    if (!inst) continue;  // stays unschedulable for the rest of this build
    pattern.add_instance(k, std::move(*inst));
    heap.push(candidate_key(pattern, k));
  }
  return pattern;
}

Pattern build_pattern_naive(const Scenario& scenario, double period,
                            const EngineConfig& config) {
  Pattern pattern(scenario, period);
  while (true) {
    std::optional<CandidateKey> best;
    for (size_t k = 0; k < pattern.app_count(); ++k) {
      if (!pattern.is_schedulable(k)) continue;
      CandidateKey key = candidate_key(pattern, k);
      if (!best || candidate_before(key, *best, config.tiebreak)) best = key;
    }
    if (!best) break;
    auto inst = plan_insertion(pattern, best->index);
    if (!inst) throw std::logic_error("naive builder: schedulable app failed to insert");
    pattern.add_instance(best->index, std::move(*inst));
  }
  return pattern;
}

double min_feasible_period(const Scenario& scenario) {
  if (scenario.apps.empty())
    throw std::invalid_argument("scenario has no applications");
  double t_min = 0;
  for (const auto& app : scenario.apps)
    t_min = std::max(t_min, app.compute_time + min_io_time(app, scenario.platform));
  return t_min;
}

std::vector<double> sweep_periods(const Scenario& scenario, const EngineConfig& config) {
  config.check();
  double t_min = min_feasible_period(scenario);
  double t_max = config.kprime * t_min;
  std::vector<double> periods;
  for (double t = t_min; t <= t_max; t *= 1.0 + config.epsilon) periods.push_back(t);
  return periods;
}

namespace {

std::vector<SweepRow> run_sweep(const Scenario& scenario, const EngineConfig& config,
                                const std::vector<double>& periods) {
  std::vector<SweepRow> rows(periods.size());
  auto build_row = [&](size_t i) {
    Pattern p = build_pattern(scenario, periods[i], config);
    rows[i] = {periods[i], p.syseff(), p.dilation(), p.total_weighted_work()};
  };
#ifdef _OPENMP
  if (config.threads != 1) {
    int use = config.threads == 0 ? omp_get_max_threads() : config.threads;
#pragma omp parallel for schedule(dynamic, 1) num_threads(use)
    for (long i = 0; i < static_cast<long>(periods.size()); ++i) build_row(i);
    return rows;
  }
#endif
  for (size_t i = 0; i < periods.size(); ++i) build_row(i);
  return rows;
}

bool row_better(const SweepRow& a, const SweepRow& b, Objective objective) {
  if (objective == Objective::MaxSysEff) return a.syseff > b.syseff;
  if (a.dilation != b.dilation) return a.dilation < b.dilation;
  return a.syseff > b.syseff;
}

}  // namespace

std::vector<SweepRow> sweep_report(const Scenario& scenario, const EngineConfig& config) {
  return run_sweep(scenario, config, sweep_periods(scenario, config));
}

PerschedResult run_persched(const Scenario& scenario, const EngineConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  config.check();
  scenario.check();

  auto periods = sweep_periods(scenario, config);
  auto rows = run_sweep(scenario, config, periods);
  size_t best = 0;
  for (size_t i = 1; i < rows.size(); ++i)
    if (row_better(rows[i], rows[best], config.objective)) best = i;

  double t_opt = rows[best].period;
  Pattern p_opt = build_pattern(scenario, t_opt, config);
  const double work_opt = p_opt.total_weighted_work();

  // Shrink the period in 1/eps uniform steps down to t_opt/(1+eps); keep
  // going only while the rebuilt pattern holds exactly the same amount of
  // work, which then runs at a strictly better efficiency.
  int steps = std::max(1, static_cast<int>(std::floor(1.0 / config.epsilon)));
  double step = (t_opt - t_opt / (1.0 + config.epsilon)) / steps;
  double t = t_opt;
  for (int i = 1; i <= steps; ++i) {
    t -= step;
    if (t <= 0) break;
    Pattern p = build_pattern(scenario, t, config);
    if (p.total_weighted_work() != work_opt) break;
    p_opt = std::move(p);
  }

  PerschedResult result{std::move(p_opt), {}, periods.front(), t_opt, rows[best].syseff,
                        upper_bound_syseff(scenario), 0.0};
  result.metrics = result.pattern.metrics();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace persched
