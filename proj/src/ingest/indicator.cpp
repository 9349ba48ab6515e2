#include "crossflow/ingest/indicator.hpp"

#include "crossflow/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace crossflow::ingest {

std::string to_string(Frequency f) {
    switch (f) {
        case Frequency::Daily: return "daily";
        case Frequency::Weekly: return "weekly";
        case Frequency::Monthly: return "monthly";
    }
    return "daily";
}

Frequency parse_frequency(const std::string& text) {
    if (text == "daily") return Frequency::Daily;
    if (text == "weekly") return Frequency::Weekly;
    if (text == "monthly") return Frequency::Monthly;
    throw ValidationError("frequency", "unknown frequency '" + text + "'");
}

int native_period_days(Frequency f) {
    switch (f) {
        case Frequency::Daily: return 1;
        case Frequency::Weekly: return 7;
        case Frequency::Monthly: return 31;
    }
    return 1;
}

int IndicatorSource::effective_max_gap() const {
    return max_gap.value_or(std::max(7, native_period_days(frequency)));
}

char to_char(FillFlag f) {
    switch (f) {
        case FillFlag::Observed: return 'o';
        case FillFlag::Filled: return 'f';
        case FillFlag::Missing: return 'm';
    }
    return 'm';
}

FillFlag parse_fill_flag(char c) {
    switch (c) {
        case 'o': return FillFlag::Observed;
        case 'f': return FillFlag::Filled;
        case 'm': return FillFlag::Missing;
        default: throw ValidationError("mask", std::string("unknown fill flag '") + c + "'");
    }
}

std::optional<double> IndicatorSeries::at(Date d) const {
    const long i = days_between(start, d);
    if (i < 0 || static_cast<std::size_t>(i) >= values.size()) return std::nullopt;
    if (mask[static_cast<std::size_t>(i)] == FillFlag::Missing) return std::nullopt;
    return values[static_cast<std::size_t>(i)];
}

}  // namespace crossflow::ingest
