#pragma once

#include <optional>

#include "persched/step_profile.hpp"

namespace persched::detail {

struct FirstFit {
  double start = 0;  // event time chosen as io_start, in [0, T)
  double span = 0;
  FillResult fill;
};

// Span-minimizing placement of a `volume` transfer capped at `cap`, with the
// io start restricted to event times of the profile. A placement is feasible
// when its span fits in max_span (the period minus the compute phase). Ties
// go to the earliest start. Expects volume > 0.
std::optional<FirstFit> best_first_fit(const StepProfile& profile, double cap, double volume,
                                       double max_span);

}  // namespace persched::detail
