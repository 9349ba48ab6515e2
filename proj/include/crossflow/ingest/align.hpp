#pragma once

#include "crossflow/ingest/indicator.hpp"

#include <vector>

namespace crossflow::ingest {

// Lays records on a daily grid over `range`. Days without an observation
// take the most recent observed value if it is at most `max_gap` days old
// (flag Filled), otherwise they are Missing. Weekly and monthly sources fill
// the same way, so their max_gap must cover the native period. Gap and fill
// counts are written into `report` when given.
IndicatorSeries align_daily(const std::vector<RawRecord>& records, const IndicatorSource& source,
                            DateRange range, int max_gap, IngestReport* report = nullptr);

// Trailing moving average; a day is Missing unless all `window` inputs are
// present. Output id is "<id>_ma<window>".
IndicatorSeries moving_average(const IndicatorSeries& series, int window);

}  // namespace crossflow::ingest
