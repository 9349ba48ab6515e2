#include "crossflow/ingest/align.hpp"

#include "crossflow/common/error.hpp"

#include <cmath>
#include <limits>

namespace crossflow::ingest {

IndicatorSeries align_daily(const std::vector<RawRecord>& records, const IndicatorSource& source,
                            DateRange range, int max_gap, IngestReport* report) {
    if (records.empty()) throw ValidationError(source.id, "no records to align");
    if (range.empty()) throw ValidationError("range", "empty date range");
    if (max_gap < 0) throw ValidationError("max_gap", "max_gap must be >= 0");

    const auto n = static_cast<std::size_t>(range.length());
    IndicatorSeries out{source.id, source.units, range.first,
                        std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()),
                        std::vector<FillFlag>(n, FillFlag::Missing)};

    std::optional<Date> last_date;
    double last_value = 0.0;
    std::size_t next = 0;
    // Observations before the range can still carry forward into it.
    for (; next < records.size() && records[next].date < range.first; ++next) {
        if (records[next].value) {
            last_date = records[next].date;
            last_value = *records[next].value;
        }
    }

    std::size_t fills = 0, gaps = 0, longest = 0, run = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Date day = add_days(range.first, static_cast<long>(i));
        bool observed = false;
        if (next < records.size() && records[next].date == day) {
            if (records[next].value) {
                observed = true;
                last_date = day;
                last_value = *records[next].value;
            }
            ++next;
        }
        if (observed) {
            out.values[i] = last_value;
            out.mask[i] = FillFlag::Observed;
            run = 0;
            continue;
        }
        if (run++ == 0) ++gaps;
        longest = std::max(longest, run);
        if (last_date && days_between(*last_date, day) <= max_gap) {
            out.values[i] = last_value;
            out.mask[i] = FillFlag::Filled;
            ++fills;
        }
    }

    if (report) {
        report->gap_count = gaps;
        report->longest_gap = longest;
        report->fill_count = fills;
    }
    return out;
}

IndicatorSeries moving_average(const IndicatorSeries& series, int window) {
    if (window < 1) throw ValidationError("window", "moving-average window must be >= 1");
    IndicatorSeries out = series;
    out.source_id = series.source_id + "_ma" + std::to_string(window);
    const auto w = static_cast<std::size_t>(window);
    for (std::size_t i = 0; i < series.size(); ++i) {
        bool complete = i + 1 >= w;
        double sum = 0.0;
        bool all_observed = true;
        for (std::size_t k = 0; complete && k < w; ++k) {
            const std::size_t j = i + 1 - w + k;
            if (series.mask[j] == FillFlag::Missing) {
                complete = false;
            } else {
                sum += series.values[j];
                all_observed = all_observed && series.mask[j] == FillFlag::Observed;
            }
        }
        if (complete) {
            out.values[i] = sum / static_cast<double>(w);
            out.mask[i] = all_observed ? FillFlag::Observed : FillFlag::Filled;
        } else {
            out.values[i] = std::numeric_limits<double>::quiet_NaN();
            out.mask[i] = FillFlag::Missing;
        }
    }
    return out;
}

}  // namespace crossflow::ingest
