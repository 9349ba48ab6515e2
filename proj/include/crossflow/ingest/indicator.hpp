#pragma once

#include "crossflow/common/date.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace crossflow::ingest {

enum class Frequency { Daily, Weekly, Monthly };

std::string to_string(Frequency f);
Frequency parse_frequency(const std::string& text);

// Days a single observation covers at its native frequency.
int native_period_days(Frequency f);

struct IndicatorSource {
    std::string id;
    std::string display_name;
    Frequency frequency = Frequency::Daily;
    std::string units;
    std::string value_column;
    std::filesystem::path file;
    // When set, parsed instead of `file` (uploads through the API).
    std::optional<std::string> content;
    char delimiter = ',';
    // Forward-fill limit in days; defaults to max(7, native period).
    std::optional<int> max_gap;

    int effective_max_gap() const;
};

struct RawRecord {
    Date date;
    std::optional<double> value;  // nullopt for an explicit NA cell
    std::string source_id;
};

struct RejectedRow {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string reason;
};

struct IngestReport {
    std::string source_id;
    std::size_t rows_read = 0;
    std::size_t rows_accepted = 0;
    std::vector<RejectedRow> rejected;
    std::size_t gap_count = 0;
    std::size_t longest_gap = 0;
    std::size_t fill_count = 0;
};

enum class FillFlag { Observed, Filled, Missing };

char to_char(FillFlag f);  // 'o', 'f', 'm'
FillFlag parse_fill_flag(char c);

// Contiguous daily series. Missing days hold NaN.
struct IndicatorSeries {
    std::string source_id;
    std::string units;
    Date start;
    std::vector<double> values;
    std::vector<FillFlag> mask;

    std::size_t size() const { return values.size(); }
    DateRange range() const { return {start, add_days(start, static_cast<long>(values.size()) - 1)}; }
    // nullopt when outside the range or flagged missing.
    std::optional<double> at(Date d) const;
};

}  // namespace crossflow::ingest
