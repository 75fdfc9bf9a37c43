#include "persched/step_profile.hpp"

#include <algorithm>
#include <cassert>

namespace persched {

StepProfile::StepProfile(double period, double capacity)
    : period_(period), capacity_(capacity) {
  if (!(period > 0)) throw std::invalid_argument("step profile: period must be > 0");
  if (!(capacity > 0)) throw std::invalid_argument("step profile: capacity must be > 0");
  pieces_.emplace(0.0, 0.0);
}

double StepProfile::used_at(double t) const {
  double w = wrap_time(t, period_);
  auto it = pieces_.upper_bound(w);
  --it;  // key 0 always present
  return it->second;
}

double StepProfile::residual_at(double t) const {
  double r = capacity_ - used_at(t);
  return r > 0 ? r : 0.0;
}

std::vector<std::pair<double, double>> StepProfile::pieces() const {
  return {pieces_.begin(), pieces_.end()};
}

std::vector<double> StepProfile::events_in(const CyclicWindow& w) const {
  double length = std::max(w.length, 0.0);
  double end = w.start + length;
  std::vector<double> ev;
  ev.push_back(w.start);
  for (auto it = pieces_.upper_bound(w.start); it != pieces_.end() && it->first < end; ++it)
    ev.push_back(it->first);
  if (end > period_) {
    double rem = end - period_;
    for (auto it = pieces_.begin(); it != pieces_.end() && it->first < rem; ++it) {
      double t = it->first + period_;
      if (t > w.start) ev.push_back(t);
    }
  }
  ev.push_back(end);
  return ev;
}

double StepProfile::integrate_capped(const CyclicWindow& w, double cap) const {
  if (cap <= kRateEps || w.length <= 0) return 0.0;
  auto ev = events_in(w);
  double total = 0.0;
  for (size_t i = 0; i + 1 < ev.size(); ++i) {
    double len = ev[i + 1] - ev[i];
    if (len <= 0) continue;
    double rate = std::min(cap, residual_at(0.5 * (ev[i] + ev[i + 1])));
    if (rate > kRateEps) total += rate * len;
  }
  return total;
}

FillResult StepProfile::greedy_fill(const CyclicWindow& w, double cap, double volume) const {
  FillResult res;
  double left = volume;
  if (left <= volume * kVolRelTol) {  // in particular volume == 0
    res.feasible = true;
    return res;
  }
  if (cap <= kRateEps || w.length <= 0) return res;

  auto ev = events_in(w);
  double first_pos = 0, last_end = 0, prev_end = 0;
  bool started = false;
  for (size_t i = 0; i + 1 < ev.size() && left > volume * kVolRelTol; ++i) {
    double len = ev[i + 1] - ev[i];
    if (len <= 0) continue;
    double rate = std::min(cap, residual_at(0.5 * (ev[i] + ev[i + 1])));
    if (rate <= kRateEps) continue;
    double dt = std::min(len, left / rate);
    if (!started) {
      started = true;
      first_pos = ev[i];
    }
    if (!res.segments.empty() && prev_end == ev[i] && res.segments.back().rate == rate) {
      res.segments.back().duration += dt;
    } else {
      res.segments.push_back({wrap_time(ev[i], period_), dt, rate});
    }
    prev_end = ev[i] + dt;
    last_end = prev_end;
    left -= dt * rate;
    res.filled += dt * rate;
  }
  if (left > volume * kVolRelTol) {
    res.segments.clear();
    res.filled = 0;
    return res;
  }
  res.feasible = true;
  if (started) {
    res.lead = first_pos - w.start;
    res.span = last_end - first_pos;
  }
  return res;
}

// Inserts a breakpoint and returns its effective coordinate. Coordinates
// within time_tol of an existing breakpoint snap onto it, so event times
// recomputed through wrap arithmetic cannot split off ulp-wide slivers.
double StepProfile::ensure_breakpoint(double t) {
  const double snap = time_tol(period_);
  if (t <= snap) return 0.0;
  if (t >= period_ - snap) return period_;
  auto it = pieces_.upper_bound(t);
  auto prev = std::prev(it);
  if (t - prev->first <= snap) return prev->first;
  if (it != pieces_.end() && it->first - t <= snap) return it->first;
  pieces_.emplace_hint(it, t, prev->second);
  return t;
}

void StepProfile::merge_equal_in(double a, double b) {
  auto it = pieces_.lower_bound(a);
  if (it != pieces_.begin()) --it;
  while (it != pieces_.end()) {
    auto next = std::next(it);
    if (next == pieces_.end() || next->first > b) break;
    if (next->second == it->second)
      pieces_.erase(next);
    else
      it = next;
  }
}

void StepProfile::apply_linear(double a, double b, double delta, bool check_cap) {
  assert(a >= 0 && b <= period_ + time_tol(period_));
  double ae = ensure_breakpoint(a);
  double be = ensure_breakpoint(std::min(b, period_));
  if (be <= ae) return;  // snapped away, carries no volume
  auto it = pieces_.lower_bound(ae);
  for (; it != pieces_.end() && it->first < be; ++it) {
    it->second += delta;
    if (check_cap && it->second > capacity_ + kCapSlack) throw CapacityExceededError(it->first);
    if (it->second < 0) {
      if (it->second < -kRateEps)
        throw std::logic_error("step profile: usage removal below zero");
      it->second = 0;
    }
  }
  merge_equal_in(ae, be);
}

void StepProfile::apply(const std::vector<Segment>& segments, double sign) {
  for (const auto& seg : segments) {
    if (seg.duration <= 0 || seg.rate <= 0) continue;
    if (seg.duration > period_ + time_tol(period_))
      throw std::invalid_argument("segment longer than the period");
    double a = wrap_time(seg.start, period_);
    double len = std::min(seg.duration, period_);
    double delta = sign * seg.rate;
    if (a + len <= period_) {
      apply_linear(a, a + len, delta, sign > 0);
    } else {
      apply_linear(a, period_, delta, sign > 0);
      apply_linear(0, a + len - period_, delta, sign > 0);
    }
  }
}

StepProfile StepProfile::add_usage(const std::vector<Segment>& segments) const {
  StepProfile out = *this;
  out.apply(segments, +1);
  return out;
}

StepProfile StepProfile::remove_usage(const std::vector<Segment>& segments) const {
  StepProfile out = *this;
  out.apply(segments, -1);
  return out;
}

void StepProfile::add_usage_in_place(const std::vector<Segment>& segments) {
  apply(segments, +1);
}

void StepProfile::remove_usage_in_place(const std::vector<Segment>& segments) {
  apply(segments, -1);
}

bool StepProfile::approx_equal(const StepProfile& other, double rate_tol) const {
  if (period_ != other.period_ || capacity_ != other.capacity_) return false;
  std::vector<double> grid;
  for (const auto& [t, v] : pieces_) grid.push_back(t);
  for (const auto& [t, v] : other.pieces_) grid.push_back(t);
  grid.push_back(period_);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    double mid = 0.5 * (grid[i] + grid[i + 1]);
    if (std::abs(used_at(mid) - other.used_at(mid)) > rate_tol) return false;
  }
  return true;
}

}  // namespace persched
