#pragma once

#include <cmath>

namespace persched {

// Bandwidth below this is treated as zero when deciding whether an event
// interval can carry I/O (GB/s).
inline constexpr double kRateEps = 1e-9;

// Relative tolerance on transfer-volume completion.
inline constexpr double kVolRelTol = 1e-6;

// Allowed overshoot of the aggregate bandwidth cap (GB/s).
inline constexpr double kCapSlack = 1e-9;

// Absolute time tolerance. Scaled with the period so it stays above the
// accumulated rounding error of cyclic arithmetic on large periods.
inline double time_tol(double period) { return 1e-9 + 1e-12 * period; }

// Wrap t into [0, period).
inline double wrap_time(double t, double period) {
  double w = std::fmod(t, period);
  if (w < 0) w += period;
  if (w >= period) w -= period;
  if (w < 0) w = 0;  // -0.0 and fmod edge cases
  return w;
}

// Cyclic distance travelled going forward from `from` to `to`, in [0, period).
inline double cyc_delta(double from, double to, double period) {
  return wrap_time(to - from, period);
}

}  // namespace persched
