#include "persched/pattern.hpp"

#include <algorithm>
#include <cmath>

#include "persched/placement.hpp"

namespace persched {

double InstanceSchedule::volume() const {
  double v = 0;
  for (const auto& s : segments) v += s.duration * s.rate;
  return v;
}

Pattern::Pattern(const Scenario& scenario, double period)
    : period_(period),
      platform_(scenario.platform),
      usage_(period, scenario.platform.total_bw) {
  if (!(period > 0)) throw std::invalid_argument("pattern: period must be > 0");
  scenario.check();
  schedules_.reserve(scenario.apps.size());
  for (const auto& app : scenario.apps)
    schedules_.push_back({app, derive(app, scenario.platform), {}});
}

int Pattern::instance_count(size_t k) const {
  return static_cast<int>(schedules_[k].instances.size());
}

double Pattern::periodic_efficiency(size_t k) const {
  const auto& s = schedules_[k];
  if (s.instances.empty()) return 0.0;
  return static_cast<double>(s.instances.size()) * s.app.compute_time / period_;
}

double Pattern::app_dilation(size_t k) const {
  double pe = periodic_efficiency(k);
  if (pe <= 0) return kInfiniteDilation;
  return schedules_[k].derived.best_efficiency / pe;
}

double Pattern::total_weighted_work() const {
  double sum = 0;
  for (const auto& s : schedules_)
    sum += s.app.procs * (static_cast<double>(s.instances.size()) * s.app.compute_time);
  return sum;
}

double Pattern::syseff() const {
  return total_weighted_work() / (platform_.num_procs * period_);
}

double Pattern::dilation() const {
  if (schedules_.empty()) return 1.0;
  double worst = 0.0;
  for (size_t k = 0; k < schedules_.size(); ++k) worst = std::max(worst, app_dilation(k));
  return worst;
}

ScheduleMetrics Pattern::metrics() const {
  ScheduleMetrics m;
  m.period = period_;
  m.syseff = syseff();
  m.dilation = dilation();
  for (size_t k = 0; k < schedules_.size(); ++k) {
    const auto& s = schedules_[k];
    m.apps.push_back({s.app.id, instance_count(k), s.derived.best_efficiency,
                      periodic_efficiency(k), app_dilation(k)});
  }
  return m;
}

std::optional<CyclicWindow> Pattern::insertion_window(size_t k) const {
  const auto& s = schedules_[k];
  if (s.instances.empty()) return std::nullopt;
  const double w = s.app.compute_time;
  const double ttol = time_tol(period_);
  const InstanceSchedule& first = s.instances.front();
  const InstanceSchedule& last = s.instances.back();
  // Arc from the first io start to the last io end holds every instance;
  // for a single zero-span instance it degenerates to 0, i.e. a free circle.
  double coverage = cyc_delta(first.io_start, last.io_end(period_), period_);
  double len = period_ - coverage - 2 * w;
  if (len < -ttol) return std::nullopt;
  return CyclicWindow{wrap_time(last.io_end(period_) + w, period_), std::max(len, 0.0)};
}

bool Pattern::is_schedulable(size_t k) const {
  const auto& s = schedules_[k];
  const double vol = s.app.io_volume;
  if (s.instances.empty()) {
    double max_span = period_ - s.app.compute_time;
    if (vol <= 0) return max_span >= -time_tol(period_);
    return detail::best_first_fit(usage_, s.derived.max_rate, vol, max_span).has_value();
  }
  auto win = insertion_window(k);
  if (!win) return false;
  if (vol <= 0) return true;
  return usage_.greedy_fill(*win, s.derived.max_rate, vol).feasible;
}

void Pattern::add_instance(size_t k, InstanceSchedule inst) {
  usage_.add_usage_in_place(inst.segments);
  schedules_[k].instances.push_back(std::move(inst));
}

std::vector<Violation> Pattern::validate() const {
  std::vector<Violation> out;
  const double ttol = time_tol(period_);

  StepProfile rebuilt(period_, platform_.total_bw);
  bool rebuilt_ok = true;
  try {
    for (const auto& s : schedules_)
      for (const auto& inst : s.instances) rebuilt.add_usage_in_place(inst.segments);
  } catch (const CapacityExceededError& e) {
    out.push_back({"aggregate bandwidth exceeds capacity", "", e.at_time});
    rebuilt_ok = false;
  }
  if (rebuilt_ok && !rebuilt.approx_equal(usage())) {
    out.push_back({"stored usage differs from instance superposition", "", 0});
  }

  for (const auto& s : schedules_) {
    const double w = s.app.compute_time;
    const double vol = s.app.io_volume;
    const size_t l = s.instances.size();

    for (const auto& inst : s.instances) {
      for (const auto& seg : inst.segments)
        if (seg.rate > s.derived.max_rate + kRateEps)
          out.push_back({"segment rate above the app bandwidth cap", s.app.id, seg.start});

      double v = inst.volume();
      if (std::abs(v - vol) > std::max(vol * kVolRelTol, 1e-9))
        out.push_back({"instance volume " + std::to_string(v) + " GB, expected " +
                           std::to_string(vol) + " GB",
                       s.app.id, inst.io_start});

      bool consistent = true;
      double pos = 0;
      for (const auto& seg : inst.segments) {
        double off = cyc_delta(inst.io_start, seg.start, period_);
        if (off < pos - ttol) consistent = false;
        pos = off + seg.duration;
      }
      if (!inst.segments.empty() &&
          cyc_delta(inst.io_start, inst.segments.front().start, period_) > ttol)
        consistent = false;
      if (!consistent || std::abs(pos - inst.span) > ttol * (4.0 + inst.segments.size()))
        out.push_back({"instance segments inconsistent with io_start/span", s.app.id,
                       inst.io_start});
    }

    if (l >= 1) {
      double cycle = 0;
      for (size_t i = 0; i < l; ++i) {
        const auto& cur = s.instances[i];
        const auto& nxt = s.instances[(i + 1) % l];
        double gap = (l == 1) ? period_ - cur.span
                              : cyc_delta(cur.io_end(period_), nxt.io_start, period_);
        if (gap < w - 10 * ttol)
          out.push_back({"compute gap " + std::to_string(gap) + " s shorter than " +
                             std::to_string(w) + " s",
                         s.app.id, cur.io_end(period_)});
        cycle += cur.span + gap;
      }
      if (std::abs(cycle - period_) > ttol * (10.0 + 4.0 * l))
        out.push_back({"instance chain does not close over one period", s.app.id, 0});
    }
  }
  return out;
}

Pattern Pattern::rotated(double offset) const {
  Pattern out = *this;
  out.usage_ = StepProfile(period_, platform_.total_bw);
  for (auto& s : out.schedules_) {
    for (auto& inst : s.instances) {
      inst.io_start = wrap_time(inst.io_start + offset, period_);
      for (auto& seg : inst.segments) seg.start = wrap_time(seg.start + offset, period_);
      out.usage_.add_usage_in_place(inst.segments);
    }
  }
  return out;
}

}  // namespace persched
