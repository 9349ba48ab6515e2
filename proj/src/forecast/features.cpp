#include "crossflow/forecast/features.hpp"

#include "crossflow/common/error.hpp"

#include <algorithm>
#include <limits>
#include <optional>

namespace crossflow::forecast {

namespace {

constexpr std::pair<CalendarFlag, const char*> kFlagNames[] = {
    {CalendarFlag::ChristmasWeek, "christmas_week"}, {CalendarFlag::EasterWeek, "easter_week"},
    {CalendarFlag::SchoolHolidays, "school_holidays"}, {CalendarFlag::BusDays, "bus_days"},
    {CalendarFlag::BorderClosed, "border_closed"},   {CalendarFlag::NotableDates, "notable_dates"},
};

bool in_any(const std::vector<DateRange>& ranges, Date d) {
    return std::any_of(ranges.begin(), ranges.end(), [d](const DateRange& r) { return r.contains(d); });
}

bool in_list(const std::vector<Date>& dates, Date d) { return std::find(dates.begin(), dates.end(), d) != dates.end(); }

std::vector<const ingest::IndicatorSeries*> select_indicators(const std::vector<ingest::IndicatorSeries>& all,
                                                              const FeatureSpec& spec) {
    std::vector<const ingest::IndicatorSeries*> out;
    if (spec.indicators.empty()) {
        for (const auto& s : all) out.push_back(&s);
        std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->source_id < b->source_id; });
        return out;
    }
    for (std::size_t i = 0; i < spec.indicators.size(); ++i) {
        const auto& id = spec.indicators[i];
        auto it = std::find_if(all.begin(), all.end(), [&](const auto& s) { return s.source_id == id; });
        if (it == all.end()) {
            throw ValidationError("features.indicators[" + std::to_string(i) + "]", "unknown indicator '" + id + "'");
        }
        out.push_back(&*it);
    }
    return out;
}

enum class RowKind { Labelled, Future };

FeatureMatrix assemble(const DailySeries& arrivals, const std::vector<ingest::IndicatorSeries>& indicators,
                       const FeatureSpec& spec, RowKind kind) {
    validate(spec);
    const DailySeries target = build_target(arrivals, spec.target);
    const auto chosen = select_indicators(indicators, spec);

    FeatureMatrix m;
    for (int lag : spec.target_lags) m.columns.push_back("lag_" + std::to_string(lag));
    for (const auto* s : chosen) m.columns.push_back(s->source_id);
    for (CalendarFlag f : spec.calendar_flags) m.columns.push_back(to_string(f));

    Date first = target.start;
    for (const auto* s : chosen) first = std::min(first, s->start);
    const Date last = target.range().last;

    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    for (Date d = first; d <= last; d = add_days(d, 1)) {
        const auto label = target.at(add_days(d, spec.target.horizon));
        const bool label_beyond_data = add_days(d, spec.target.horizon) > last;
        if (kind == RowKind::Labelled && !label) continue;
        if (kind == RowKind::Future && !label_beyond_data) continue;

        std::vector<double> row;
        row.reserve(m.columns.size());
        bool complete = true;
        for (int lag : spec.target_lags) {
            const auto v = target.at(add_days(d, -lag));
            if (!v) {
                complete = false;
                break;
            }
            row.push_back(*v);
        }
        for (std::size_t i = 0; complete && i < chosen.size(); ++i) {
            const auto v = chosen[i]->at(d);
            if (!v) complete = false;
            else row.push_back(*v);
        }
        if (!complete) continue;
        for (CalendarFlag f : spec.calendar_flags) row.push_back(calendar_flag(f, d, spec.calendar) ? 1.0 : 0.0);

        m.dates.push_back(d);
        rows.push_back(std::move(row));
        labels.push_back(label ? *label : std::numeric_limits<double>::quiet_NaN());
    }

    m.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.columns.size()));
    m.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < m.columns.size(); ++c) {
            m.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
        m.y(static_cast<Eigen::Index>(r)) = labels[r];
    }
    return m;
}

}  // namespace

std::string to_string(CalendarFlag f) {
    for (const auto& [flag, name] : kFlagNames) {
        if (flag == f) return name;
    }
    return "";
}

CalendarFlag parse_calendar_flag(const std::string& text) {
    for (const auto& [flag, name] : kFlagNames) {
        if (text == name) return flag;
    }
    throw ValidationError("features.calendar_flags", "unknown calendar flag '" + text + "'");
}

bool calendar_flag(CalendarFlag flag, Date day, const CalendarConfig& cal) {
    const std::chrono::year_month_day ymd{day};
    switch (flag) {
        case CalendarFlag::ChristmasWeek: {
            if (ymd.month() != std::chrono::December) return false;
            const unsigned dd = static_cast<unsigned>(ymd.day());
            return dd >= cal.christmas_first_day && dd < cal.christmas_first_day + 7;
        }
        case CalendarFlag::EasterWeek: {
            const Date easter = easter_sunday(static_cast<int>(ymd.year()));
            return add_days(easter, -6) <= day && day <= easter;
        }
        case CalendarFlag::SchoolHolidays: return in_any(cal.school_holidays, day);
        case CalendarFlag::BusDays: return in_list(cal.bus_days, day);
        case CalendarFlag::BorderClosed: return in_any(cal.border_closed, day);
        case CalendarFlag::NotableDates: return in_list(cal.notable_dates, day);
    }
    return false;
}

void validate(const FeatureSpec& spec) {
    validate(spec.target);
    for (std::size_t i = 0; i < spec.target_lags.size(); ++i) {
        if (spec.target_lags[i] < spec.target.horizon) {
            throw ValidationError("features.target_lags[" + std::to_string(i) + "]",
                                  "lag " + std::to_string(spec.target_lags[i]) + " is shorter than the " +
                                      std::to_string(spec.target.horizon) + "-day horizon");
        }
    }
    if (spec.calendar.christmas_first_day < 1 || spec.calendar.christmas_first_day > 25) {
        throw ValidationError("features.calendar.christmas_first_day", "must lie in 1..25");
    }
}

FeatureMatrix FeatureMatrix::slice(const std::vector<std::size_t>& indices) const {
    FeatureMatrix out;
    out.columns = columns;
    out.X.resize(static_cast<Eigen::Index>(indices.size()), X.cols());
    out.y.resize(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = static_cast<Eigen::Index>(indices[i]);
        out.dates.push_back(dates.at(indices[i]));
        out.X.row(static_cast<Eigen::Index>(i)) = X.row(src);
        out.y(static_cast<Eigen::Index>(i)) = y(src);
    }
    return out;
}

FeatureMatrix FeatureMatrix::head(std::size_t n) const {
    std::vector<std::size_t> idx(std::min(n, rows()));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return slice(idx);
}

FeatureMatrix FeatureMatrix::tail_from(std::size_t first) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = first; i < rows(); ++i) idx.push_back(i);
    return slice(idx);
}

FeatureMatrix build_features(const DailySeries& arrivals, const std::vector<ingest::IndicatorSeries>& indicators,
                             const FeatureSpec& spec) {
    auto m = assemble(arrivals, indicators, spec, RowKind::Labelled);
    if (m.rows() == 0) throw ValidationError("features", "no date has every feature and a label");
    return m;
}

FeatureMatrix build_forecast_rows(const DailySeries& arrivals, const std::vector<ingest::IndicatorSeries>& indicators,
                                  const FeatureSpec& spec) {
    return assemble(arrivals, indicators, spec, RowKind::Future);
}

}  // namespace crossflow::forecast
