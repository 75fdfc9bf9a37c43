#include "persched/placement.hpp"

#include <algorithm>
#include <vector>

namespace persched::detail {

std::optional<FirstFit> best_first_fit(const StepProfile& profile, double cap, double volume,
                                       double max_span) {
  const double period = profile.period();
  const double ttol = time_tol(period);
  if (max_span < -ttol || cap <= kRateEps || volume <= 0) return std::nullopt;

  std::vector<double> starts;
  std::vector<double> rates;
  starts.reserve(profile.piece_count());
  rates.reserve(profile.piece_count());
  for (const auto& [t, used] : profile.piece_map()) {
    starts.push_back(t);
    double r = std::min(cap, std::max(0.0, profile.capacity() - used));
    rates.push_back(r > kRateEps ? r : 0.0);
  }
  const size_t n = starts.size();

  std::vector<double> used;
  used.reserve(n);
  for (const auto& [t, u] : profile.piece_map()) used.push_back(u);

  // Event list unrolled over two periods so spans may wrap, with prefix sums
  // of the capped capacity and of the existing usage for O(1) reach queries.
  std::vector<double> ev(2 * n + 1);
  std::vector<double> prefix(2 * n + 1, 0.0);
  std::vector<double> prefix_used(2 * n + 1, 0.0);
  for (size_t j = 0; j < 2 * n; ++j) ev[j] = starts[j % n] + (j < n ? 0.0 : period);
  ev[2 * n] = starts[0] + 2 * period;
  for (size_t j = 0; j < 2 * n; ++j) {
    prefix[j + 1] = prefix[j] + rates[j % n] * (ev[j + 1] - ev[j]);
    prefix_used[j + 1] = prefix_used[j] + used[j % n] * (ev[j + 1] - ev[j]);
  }

  const double need = volume * (1.0 - kVolRelTol);
  std::optional<FirstFit> best;
  double best_crowd = 0;
  size_t j = 0;
  for (size_t i = 0; i < n; ++i) {
    if (rates[i] <= 0.0) continue;  // a fill from here starts later anyway
    if (j < i + 1) j = i + 1;
    while (j <= 2 * n && prefix[j] - prefix[i] < need) ++j;
    if (j > 2 * n) break;  // capacity only shrinks for later starts
    double into = need - (prefix[j - 1] - prefix[i]);
    double end = ev[j - 1] + (into > 0 ? into / rates[(j - 1) % n] : 0.0);
    double span = end - ev[i];
    if (span > max_span + ttol) continue;
    // Crowding of the placement: traffic already under the occupied window.
    double crowd = prefix_used[j - 1] - prefix_used[i] + (end - ev[j - 1]) * used[(j - 1) % n];
    if (!best || span < best->span || (span == best->span && crowd < best_crowd)) {
      FirstFit f;
      f.start = starts[i];
      f.span = span;
      best = f;
      best_crowd = crowd;
    }
  }
  if (!best) return std::nullopt;

  // Segments come from the same greedy fill every insertion uses.
  CyclicWindow w{best->start, std::clamp(max_span, 0.0, period)};
  best->fill = profile.greedy_fill(w, cap, volume);
  if (!best->fill.feasible || best->fill.segments.empty()) return std::nullopt;
  best->start = wrap_time(best->start + best->fill.lead, period);
  best->span = best->fill.span;
  return best;
}

}  // namespace persched::detail
