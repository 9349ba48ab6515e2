#pragma once

#include "crossflow/ingest/indicator.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace crossflow::ingest {

// Date x indicator table over the intersection of the inputs' ranges.
// Columns are ordered by source id.
struct Panel {
    DateRange range;
    std::vector<std::string> ids;
    std::vector<std::string> units;
    std::vector<std::vector<double>> columns;   // [indicator][day]
    std::vector<std::vector<FillFlag>> masks;   // [indicator][day]
    std::vector<bool> row_flagged;              // any Missing on that day

    std::size_t days() const { return row_flagged.size(); }
    IndicatorSeries column(std::size_t i) const;
    std::vector<IndicatorSeries> series() const;
};

struct CoverageReport {
    std::size_t days = 0;
    std::size_t flagged_rows = 0;
    std::vector<std::size_t> missing_per_indicator;
    std::vector<std::size_t> filled_per_indicator;
};

struct PanelBuild {
    Panel panel;
    CoverageReport coverage;
};

// Throws ValidationError for an empty input list, duplicate ids or an empty
// intersection.
PanelBuild build_panel(std::vector<IndicatorSeries> series, std::optional<DateRange> range = std::nullopt);

// date,<id>... with empty cells for missing days.
void write_panel_csv(std::ostream& out, const Panel& panel);
// date,<id>... with o/f/m flags.
void write_mask_csv(std::ostream& out, const Panel& panel);
Panel read_panel_csv(std::istream& values, std::istream& mask);

// Min-max scaling over observed values for the nowcast display.
struct NormalizedSeries {
    std::string source_id;
    Date start;
    std::vector<double> values;  // NaN where missing
    std::vector<FillFlag> mask;
    bool degenerate = false;     // fewer than two distinct observed values
};

NormalizedSeries normalize_for_display(const IndicatorSeries& series);

}  // namespace crossflow::ingest
