#pragma once

#include "crossflow/forecast/series.hpp"
#include "crossflow/forecast/target.hpp"
#include "crossflow/ingest/indicator.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace crossflow::forecast {

enum class CalendarFlag { ChristmasWeek, EasterWeek, SchoolHolidays, BusDays, BorderClosed, NotableDates };

std::string to_string(CalendarFlag f);
CalendarFlag parse_calendar_flag(const std::string& text);

// Dates behind each calendar flag. Christmas week is the seven days from
// December `christmas_first_day`; Easter week runs Monday of Holy Week
// through Easter Sunday. The rest are explicit lists.
struct CalendarConfig {
    unsigned christmas_first_day = 22;
    std::vector<DateRange> school_holidays;
    std::vector<Date> bus_days;
    std::vector<DateRange> border_closed;
    std::vector<Date> notable_dates;
};

bool calendar_flag(CalendarFlag flag, Date day, const CalendarConfig& calendar);

struct FeatureSpec {
    TargetSpec target;
    std::vector<int> target_lags{30, 37, 44};
    // Indicator ids to use; empty means every indicator passed in.
    std::vector<std::string> indicators;
    std::vector<CalendarFlag> calendar_flags;
    CalendarConfig calendar;
};

// Throws ValidationError when a lag is shorter than the horizon.
void validate(const FeatureSpec& spec);

// Rows are indexed by feature date d; y is the target at d + horizon.
struct FeatureMatrix {
    std::vector<Date> dates;
    std::vector<std::string> columns;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;

    std::size_t rows() const { return dates.size(); }
    FeatureMatrix slice(const std::vector<std::size_t>& indices) const;
    FeatureMatrix head(std::size_t n) const;
    FeatureMatrix tail_from(std::size_t first) const;
};

// Row at d = (target(d - lag) per lag, indicator values at d, 0/1 calendar
// flags at d). Dates missing any input or the label are dropped. Throws
// ValidationError for leakage-violating lags, unknown indicator ids or an
// empty result.
FeatureMatrix build_features(const DailySeries& arrivals, const std::vector<ingest::IndicatorSeries>& indicators,
                             const FeatureSpec& spec);

// Rows whose features are complete but whose label lies beyond the data:
// the dates to forecast. y is NaN.
FeatureMatrix build_forecast_rows(const DailySeries& arrivals, const std::vector<ingest::IndicatorSeries>& indicators,
                                  const FeatureSpec& spec);

}  // namespace crossflow::forecast
