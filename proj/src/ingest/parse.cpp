#include "crossflow/ingest/parse.hpp"

#include "crossflow/common/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace crossflow::ingest {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool is_na(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "N/A" || cell == "na" || cell == "null";
}

std::optional<double> parse_value(const std::string& cell) {
    double v = 0.0;
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::vector<std::string> split_delimited(std::string_view line, char delimiter) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

ParseResult parse_indicator_text(std::string_view text, const IndicatorSource& source) {
    ParseResult result;
    result.report.source_id = source.id;

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) header = split_delimited(line, source.delimiter);
    }
    if (header.empty()) throw ValidationError(source.id + ".header", "file has no header row");

    const auto col = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto date_col = col("date");
    if (!date_col) throw ValidationError(source.id + ".date", "missing 'date' column");
    const auto value_col = col(source.value_column);
    if (!value_col) {
        throw ValidationError(source.id + ".value_column", "missing value column '" + source.value_column + "'");
    }

    // date -> (line, record); last row wins.
    std::map<Date, std::pair<std::size_t, RawRecord>> by_date;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++result.report.rows_read;
        const auto fields = split_delimited(line, source.delimiter);
        if (fields.size() != header.size()) {
            result.report.rejected.push_back({line_no, "wrong column count"});
            continue;
        }
        const auto date = parse_date(fields[*date_col]);
        if (!date) {
            result.report.rejected.push_back({line_no, "unparseable date"});
            continue;
        }
        RawRecord rec{*date, std::nullopt, source.id};
        const std::string& cell = fields[*value_col];
        if (!is_na(cell)) {
            rec.value = parse_value(cell);
            if (!rec.value) {
                result.report.rejected.push_back({line_no, "unparseable value"});
                continue;
            }
        }
        auto [it, inserted] = by_date.try_emplace(*date, line_no, rec);
        if (!inserted) {
            result.report.rejected.push_back({it->second.first, "duplicate"});
            it->second = {line_no, rec};
        }
    }

    std::sort(result.report.rejected.begin(), result.report.rejected.end(),
              [](const RejectedRow& a, const RejectedRow& b) { return a.line < b.line; });
    for (auto& [date, entry] : by_date) result.records.push_back(std::move(entry.second));
    result.report.rows_accepted = result.records.size();
    if (result.records.empty()) throw ValidationError(source.id, "no accepted rows in " + source.id);
    return result;
}

ParseResult parse_indicator_file(const std::filesystem::path& path, const IndicatorSource& source) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open indicator file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_indicator_text(buf.str(), source);
}

}  // namespace crossflow::ingest
