#include "persched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace persched {

Trace unroll(const Pattern& pattern, int n_periods, const std::vector<double>& releases) {
  if (n_periods < 1) throw std::invalid_argument("unroll: n_periods must be >= 1");
  const double period = pattern.period();
  const size_t n_apps = pattern.app_count();
  if (!releases.empty() && releases.size() != n_apps)
    throw std::invalid_argument("unroll: one release time per app expected");

  Trace tr;
  tr.horizon = (n_periods + 1.0) * period;
  tr.instances.resize(n_apps);
  tr.releases.assign(n_apps, 0.0);

  for (size_t k = 0; k < n_apps; ++k) {
    const auto& s = pattern.schedule(k);
    tr.app_ids.push_back(s.app.id);
    tr.compute_times.push_back(s.app.compute_time);
    const size_t l = s.instances.size();
    if (l == 0) continue;

    // Unwrap the cyclic chain into offsets within one period span.
    std::vector<double> psi(l);
    psi[0] = s.instances[0].io_start;
    for (size_t i = 1; i < l; ++i) {
      double gap = cyc_delta(s.instances[i - 1].io_end(period), s.instances[i].io_start, period);
      psi[i] = psi[i - 1] + s.instances[i - 1].span + gap;
    }
    const double chain_end = psi[l - 1] + s.instances[l - 1].span;

    tr.instances[k].reserve(static_cast<size_t>(n_periods) * l);
    for (int r = 0; r < n_periods; ++r) {
      const double base = period + static_cast<double>(r) * period;
      for (size_t i = 0; i < l; ++i) {
        TraceInstance ti;
        ti.app = static_cast<int>(k);
        ti.index = r * static_cast<int>(l) + static_cast<int>(i);
        ti.io_start = base + psi[i];
        ti.io_end = ti.io_start + s.instances[i].span;
        ti.compute_start = i == 0 ? base - period + chain_end
                                  : base + psi[i - 1] + s.instances[i - 1].span;
        ti.volume = s.instances[i].volume();
        ti.seg_begin = static_cast<uint32_t>(tr.segments.size());
        for (const auto& seg : s.instances[i].segments) {
          double off = cyc_delta(s.instances[i].io_start, seg.start, period);
          tr.segments.push_back({ti.io_start + off, seg.duration, seg.rate});
        }
        ti.seg_count = static_cast<uint32_t>(tr.segments.size()) - ti.seg_begin;
        tr.instances[k].push_back(ti);
      }
    }
    tr.releases[k] = tr.instances[k].front().compute_start;
  }
  if (!releases.empty()) tr.releases = releases;
  return tr;
}

double actual_efficiency(const Trace& trace, size_t k, double t) {
  const double release = trace.releases.at(k);
  if (!(t > release))
    throw std::invalid_argument("actual_efficiency: t must be after the app release");
  const auto& list = trace.instances[k];
  size_t done = 0;
  for (const auto& inst : list) {
    if (inst.io_end <= t + 1e-9) ++done;
    else break;
  }
  return static_cast<double>(done) * trace.compute_times[k] / (t - release);
}

BaselineResult fair_share_baseline(const Scenario& scenario, double horizon) {
  scenario.check();
  if (!(horizon > 0)) throw std::invalid_argument("baseline: horizon must be > 0");
  const auto& pf = scenario.platform;
  const size_t n_apps = scenario.apps.size();

  struct AppState {
    bool transferring = false;
    double phase_end = 0;       // compute completion when computing
    double remaining = 0;       // GB left when transferring
    double compute_start = 0;   // of the running instance
    double io_start = 0;
    double busy = 0;            // total transfer time of completed instances
    int completed = 0;
    double last_completion = 0;
    std::vector<Segment> pending;  // segments of the running transfer
  };

  BaselineResult out;
  Trace& tr = out.trace;
  tr.horizon = horizon;
  tr.instances.resize(n_apps);
  tr.releases.assign(n_apps, 0.0);
  std::vector<AppState> st(n_apps);
  std::vector<DerivedApp> derived;
  for (size_t k = 0; k < n_apps; ++k) {
    tr.app_ids.push_back(scenario.apps[k].id);
    tr.compute_times.push_back(scenario.apps[k].compute_time);
    derived.push_back(derive(scenario.apps[k], pf));
    st[k].phase_end = scenario.apps[k].compute_time;
    st[k].compute_start = 0;
  }

  double now = 0;
  std::vector<double> total_bytes(n_apps, 0.0);
  while (now < horizon) {
    long active_procs = 0;
    for (size_t k = 0; k < n_apps; ++k)
      if (st[k].transferring) active_procs += scenario.apps[k].procs;
    double per_proc = active_procs > 0
                          ? std::min(pf.proc_bw, pf.total_bw / static_cast<double>(active_procs))
                          : 0.0;

    double next = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < n_apps; ++k) {
      if (st[k].transferring) {
        double rate = scenario.apps[k].procs * per_proc;
        next = std::min(next, rate > 0 ? now + st[k].remaining / rate : now);
      } else {
        next = std::min(next, st[k].phase_end);
      }
    }
    if (next > horizon) break;
    double dt = std::max(next - now, 0.0);

    for (size_t k = 0; k < n_apps; ++k) {
      if (!st[k].transferring || dt <= 0) continue;
      double rate = scenario.apps[k].procs * per_proc;
      st[k].remaining -= dt * rate;
      if (!st[k].pending.empty() && st[k].pending.back().rate == rate &&
          st[k].pending.back().start + st[k].pending.back().duration == now) {
        st[k].pending.back().duration += dt;
      } else {
        st[k].pending.push_back({now, dt, rate});
      }
    }
    now = next;

    for (size_t k = 0; k < n_apps; ++k) {
      const auto& app = scenario.apps[k];
      if (st[k].transferring) {
        double tol = std::max(app.io_volume * kVolRelTol, 1e-9);
        if (st[k].remaining > tol) continue;
        TraceInstance ti;
        ti.app = static_cast<int>(k);
        ti.index = st[k].completed;
        ti.compute_start = st[k].compute_start;
        ti.io_start = st[k].io_start;
        ti.io_end = now;
        ti.volume = app.io_volume;
        ti.seg_begin = static_cast<uint32_t>(tr.segments.size());
        for (const auto& seg : st[k].pending) tr.segments.push_back(seg);
        ti.seg_count = static_cast<uint32_t>(tr.segments.size()) - ti.seg_begin;
        tr.instances[k].push_back(ti);
        st[k].pending.clear();
        st[k].busy += now - st[k].io_start;
        total_bytes[k] += app.io_volume;
        st[k].completed += 1;
        st[k].last_completion = now;
        st[k].transferring = false;
        st[k].compute_start = now;
        st[k].phase_end = now + app.compute_time;
      } else if (st[k].phase_end <= now + 1e-12) {
        st[k].transferring = true;
        st[k].io_start = now;
        st[k].remaining = app.io_volume;
      }
    }
  }

  double weighted = 0;
  for (size_t k = 0; k < n_apps; ++k) {
    const auto& app = scenario.apps[k];
    BaselineAppStats a;
    a.id = app.id;
    a.completed = st[k].completed;
    a.last_completion = st[k].last_completion;
    a.achieved_rate = st[k].busy > 0 ? total_bytes[k] / st[k].busy : derived[k].max_rate;
    a.slowdown = 1.0 - a.achieved_rate / derived[k].max_rate;
    a.efficiency = st[k].completed > 0
                       ? st[k].completed * app.compute_time / st[k].last_completion
                       : 0.0;
    weighted += app.procs * a.efficiency;
    out.apps.push_back(std::move(a));
  }
  out.steady_syseff = weighted / pf.num_procs;
  return out;
}

std::vector<Violation> validate_trace(const Trace& trace, const Scenario& scenario) {
  std::vector<Violation> out;
  const auto& pf = scenario.platform;

  for (size_t k = 0; k < trace.instances.size(); ++k) {
    const auto& app = scenario.apps[k];
    const double cap = std::min(app.procs * pf.proc_bw, pf.total_bw);
    double prev_end = -std::numeric_limits<double>::infinity();
    for (const auto& inst : trace.instances[k]) {
      double vol = 0;
      for (uint32_t s = inst.seg_begin; s < inst.seg_begin + inst.seg_count; ++s) {
        const auto& seg = trace.segments[s];
        vol += seg.duration * seg.rate;
        if (seg.rate > cap + kRateEps)
          out.push_back({"trace segment above the app bandwidth cap", app.id, seg.start});
      }
      if (std::abs(vol - app.io_volume) > std::max(app.io_volume * kVolRelTol, 1e-9))
        out.push_back({"trace instance volume off by " + std::to_string(vol - app.io_volume),
                       app.id, inst.io_start});
      if (inst.compute_start < prev_end - 1e-6)
        out.push_back({"instance starts before the previous one finished", app.id,
                       inst.compute_start});
      if (inst.io_start < inst.compute_start + app.compute_time - 1e-6)
        out.push_back({"transfer starts before the compute phase ends", app.id, inst.io_start});
      prev_end = inst.io_end;
    }
  }

  // Aggregate cap at every segment boundary.
  std::vector<std::pair<double, double>> deltas;
  deltas.reserve(trace.segments.size() * 2);
  for (const auto& seg : trace.segments) {
    if (seg.duration <= 0) continue;
    deltas.emplace_back(seg.start, seg.rate);
    deltas.emplace_back(seg.start + seg.duration, -seg.rate);
  }
  std::sort(deltas.begin(), deltas.end());
  // Boundaries of distinct instances may disagree by a few ulp after
  // unrolling, so cluster near-coincident events and only check intervals of
  // real extent.
  const double ctol = 10 * time_tol(std::max(trace.horizon, 1.0));
  double level = 0;
  size_t i = 0;
  while (i < deltas.size()) {
    double t = deltas[i].first;
    while (i < deltas.size() && deltas[i].first <= t + ctol) level += deltas[i++].second;
    double next = i < deltas.size() ? deltas[i].first : t;
    if (next - t > ctol && level > pf.total_bw + 1e-6) {
      out.push_back({"aggregate trace bandwidth exceeds capacity", "", t});
      break;
    }
  }
  return out;
}

}  // namespace persched
