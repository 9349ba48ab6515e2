#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace crossflow {

using Date = std::chrono::sys_days;

// Parses YYYY-MM-DD. Returns nullopt on any malformed or impossible date.
std::optional<Date> parse_date(std::string_view text);

// Like parse_date, but throws ValidationError naming `field`.
Date parse_date_or_throw(std::string_view text, const std::string& field);

std::string format_date(Date d);

inline Date add_days(Date d, long n) { return d + std::chrono::days{n}; }

inline long days_between(Date from, Date to) { return (to - from).count(); }

// Inclusive date range.
struct DateRange {
    Date first;
    Date last;

    long length() const { return days_between(first, last) + 1; }
    bool empty() const { return last < first; }
    bool contains(Date d) const { return first <= d && d <= last; }
};

// Gregorian Easter Sunday (anonymous Gregorian algorithm).
Date easter_sunday(int year);

}  // namespace crossflow
