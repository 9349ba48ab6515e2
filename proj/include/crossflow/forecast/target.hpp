#pragma once

#include "crossflow/forecast/series.hpp"

namespace crossflow::forecast {

struct TargetSpec {
    int window = 7;    // trailing moving-average length, days
    int horizon = 30;  // forecast lead, days
};

void validate(const TargetSpec& spec);

// Trailing `window`-day mean, inclusive of the current day. The first
// window-1 days are dropped; a window touching a missing day is missing.
DailySeries build_target(const DailySeries& arrivals, const TargetSpec& spec);

}  // namespace crossflow::forecast
