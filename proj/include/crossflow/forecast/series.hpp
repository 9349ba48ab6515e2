#pragma once

#include "crossflow/common/date.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace crossflow::forecast {

// Contiguous daily series; NaN marks a missing day.
struct DailySeries {
    Date start;
    std::vector<double> values;
    std::string name;
    std::string units;

    std::size_t size() const { return values.size(); }
    DateRange range() const { return {start, add_days(start, static_cast<long>(values.size()) - 1)}; }

    std::optional<double> at(Date d) const {
        const long i = days_between(start, d);
        if (i < 0 || static_cast<std::size_t>(i) >= values.size()) return std::nullopt;
        const double v = values[static_cast<std::size_t>(i)];
        if (std::isnan(v)) return std::nullopt;
        return v;
    }
};

// Reads `date,<column>` text. Dates must be contiguous once sorted; empty or
// NA cells become NaN. Throws ValidationError / NotFoundError.
DailySeries read_daily_csv(const std::filesystem::path& path, const std::string& column = "");
DailySeries parse_daily_csv(const std::string& text, const std::string& column = "", const std::string& name = "");

}  // namespace crossflow::forecast
