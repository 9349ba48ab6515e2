#include "crossflow/ingest/panel.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/common/numfmt.hpp"
#include "crossflow/ingest/parse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace crossflow::ingest {

IndicatorSeries Panel::column(std::size_t i) const {
    return {ids.at(i), units.at(i), range.first, columns.at(i), masks.at(i)};
}

std::vector<IndicatorSeries> Panel::series() const {
    std::vector<IndicatorSeries> out;
    for (std::size_t i = 0; i < ids.size(); ++i) out.push_back(column(i));
    return out;
}

PanelBuild build_panel(std::vector<IndicatorSeries> series, std::optional<DateRange> range) {
    if (series.empty()) throw ValidationError("series", "panel needs at least one series");
    std::sort(series.begin(), series.end(),
              [](const IndicatorSeries& a, const IndicatorSeries& b) { return a.source_id < b.source_id; });
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i].source_id == series[i - 1].source_id) {
            throw ValidationError("series", "duplicate indicator id '" + series[i].source_id + "'");
        }
    }

    DateRange common = range.value_or(series.front().range());
    for (const auto& s : series) {
        if (s.values.empty()) throw ValidationError(s.source_id, "empty series");
        const auto r = s.range();
        common.first = std::max(common.first, r.first);
        common.last = std::min(common.last, r.last);
    }
    if (common.empty()) throw ValidationError("range", "indicator ranges do not intersect");

    PanelBuild out;
    Panel& p = out.panel;
    p.range = common;
    const auto n = static_cast<std::size_t>(common.length());
    p.row_flagged.assign(n, false);
    out.coverage.days = n;
    for (const auto& s : series) {
        const auto offset = static_cast<std::size_t>(days_between(s.start, common.first));
        p.ids.push_back(s.source_id);
        p.units.push_back(s.units);
        p.columns.emplace_back(s.values.begin() + static_cast<long>(offset),
                               s.values.begin() + static_cast<long>(offset + n));
        p.masks.emplace_back(s.mask.begin() + static_cast<long>(offset), s.mask.begin() + static_cast<long>(offset + n));
        std::size_t missing = 0, filled = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (p.masks.back()[i] == FillFlag::Missing) {
                p.row_flagged[i] = true;
                ++missing;
            } else if (p.masks.back()[i] == FillFlag::Filled) {
                ++filled;
            }
        }
        out.coverage.missing_per_indicator.push_back(missing);
        out.coverage.filled_per_indicator.push_back(filled);
    }
    out.coverage.flagged_rows = static_cast<std::size_t>(std::count(p.row_flagged.begin(), p.row_flagged.end(), true));
    return out;
}

void write_panel_csv(std::ostream& out, const Panel& panel) {
    out << "date";
    for (const auto& id : panel.ids) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < panel.days(); ++i) {
        out << format_date(add_days(panel.range.first, static_cast<long>(i)));
        for (std::size_t c = 0; c < panel.ids.size(); ++c) {
            out << ',';
            if (panel.masks[c][i] != FillFlag::Missing) out << format_number(panel.columns[c][i]);
        }
        out << '\n';
    }
}

void write_mask_csv(std::ostream& out, const Panel& panel) {
    out << "date";
    for (const auto& id : panel.ids) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < panel.days(); ++i) {
        out << format_date(add_days(panel.range.first, static_cast<long>(i)));
        for (std::size_t c = 0; c < panel.ids.size(); ++c) out << ',' << to_char(panel.masks[c][i]);
        out << '\n';
    }
}

Panel read_panel_csv(std::istream& values, std::istream& mask) {
    std::string vline, mline;
    if (!std::getline(values, vline) || !std::getline(mask, mline)) {
        throw ValidationError("panel", "panel files need a header row");
    }
    const auto header = split_delimited(vline, ',');
    if (header.empty() || header[0] != "date" || split_delimited(mline, ',') != header) {
        throw ValidationError("panel", "panel and mask headers must match and start with 'date'");
    }
    Panel p;
    p.ids.assign(header.begin() + 1, header.end());
    p.units.assign(p.ids.size(), "");
    p.columns.resize(p.ids.size());
    p.masks.resize(p.ids.size());
    std::size_t row = 0;
    while (std::getline(values, vline)) {
        if (vline.empty()) continue;
        if (!std::getline(mask, mline)) throw ValidationError("panel", "mask file is shorter than panel");
        const auto v = split_delimited(vline, ',');
        const auto m = split_delimited(mline, ',');
        const std::string where = "panel row " + std::to_string(row + 2);
        if (v.size() != header.size() || m.size() != header.size() || v[0] != m[0]) {
            throw ValidationError(where, "malformed panel row");
        }
        const Date d = parse_date_or_throw(v[0], where);
        if (row == 0) p.range.first = d;
        if (d != add_days(p.range.first, static_cast<long>(row))) throw ValidationError(where, "panel dates not contiguous");
        bool flagged = false;
        for (std::size_t c = 0; c < p.ids.size(); ++c) {
            if (m[c + 1].size() != 1) throw ValidationError(where, "bad mask flag");
            const FillFlag f = parse_fill_flag(m[c + 1][0]);
            double x = std::numeric_limits<double>::quiet_NaN();
            if (f != FillFlag::Missing) {
                const auto& cell = v[c + 1];
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
                if (ec != std::errc{} || ptr != cell.data() + cell.size()) throw ValidationError(where, "bad value");
            }
            flagged = flagged || f == FillFlag::Missing;
            p.columns[c].push_back(x);
            p.masks[c].push_back(f);
        }
        p.row_flagged.push_back(flagged);
        ++row;
    }
    if (row == 0) throw ValidationError("panel", "panel has no rows");
    p.range.last = add_days(p.range.first, static_cast<long>(row) - 1);
    return p;
}

NormalizedSeries normalize_for_display(const IndicatorSeries& series) {
    NormalizedSeries out{series.source_id, series.start,
                         std::vector<double>(series.size(), std::numeric_limits<double>::quiet_NaN()), series.mask,
                         false};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.mask[i] != FillFlag::Observed) continue;
        lo = std::min(lo, series.values[i]);
        hi = std::max(hi, series.values[i]);
    }
    out.degenerate = !(hi > lo);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.mask[i] == FillFlag::Missing) continue;
        out.values[i] = out.degenerate ? 0.5 : (series.values[i] - lo) / (hi - lo);
    }
    return out;
}

}  // namespace crossflow::ingest
