#pragma once

#include "crossflow/ingest/indicator.hpp"

#include <filesystem>
#include <string_view>
#include <vector>

namespace crossflow::ingest {

struct ParseResult {
    std::vector<RawRecord> records;  // sorted by date, one per date
    IngestReport report;
};

// Reads a delimited file with a header row holding `date` and the source's
// value column. Malformed rows are rejected with a reason; for duplicate
// dates the last row wins and earlier ones are rejected as "duplicate".
// Throws NotFoundError for a missing file, ValidationError for a missing
// column or when no row survives.
ParseResult parse_indicator_file(const std::filesystem::path& path, const IndicatorSource& source);
ParseResult parse_indicator_text(std::string_view text, const IndicatorSource& source);

// Splits one delimited line; double quotes group fields and "" escapes.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

}  // namespace crossflow::ingest
