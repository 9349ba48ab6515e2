#include "crossflow/forecast/series.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/ingest/parse.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace crossflow::forecast {

DailySeries parse_daily_csv(const std::string& text, const std::string& column, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("series", "empty series file");
    const auto header = ingest::split_delimited(line, ',');
    const auto date_it = std::find(header.begin(), header.end(), "date");
    if (date_it == header.end()) throw ValidationError("series.date", "missing 'date' column");
    const auto date_col = static_cast<std::size_t>(date_it - header.begin());
    std::size_t value_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == date_col) continue;
        if (column.empty() ? value_col == header.size() : header[i] == column) value_col = i;
    }
    if (value_col == header.size()) {
        throw ValidationError("series.column", "missing value column '" + column + "'");
    }

    std::map<Date, double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto f = ingest::split_delimited(line, ',');
        const std::string where = "line " + std::to_string(line_no);
        if (f.size() != header.size()) throw ValidationError(where, "wrong column count");
        const Date d = parse_date_or_throw(f[date_col], where);
        double v = std::numeric_limits<double>::quiet_NaN();
        const auto& cell = f[value_col];
        if (!(cell.empty() || cell == "NA" || cell == "nan")) {
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw ValidationError(where, "unparseable value '" + cell + "'");
            }
        }
        if (!values.emplace(d, v).second) throw ValidationError(where, "duplicate date " + f[date_col]);
    }
    if (values.empty()) throw ValidationError("series", "series has no rows");

    DailySeries s;
    s.start = values.begin()->first;
    s.name = name.empty() ? header[value_col] : name;
    const long n = days_between(s.start, values.rbegin()->first) + 1;
    s.values.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [d, v] : values) s.values[static_cast<std::size_t>(days_between(s.start, d))] = v;
    return s;
}

DailySeries read_daily_csv(const std::filesystem::path& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open series file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_daily_csv(buf.str(), column, "");
}

}  // namespace crossflow::forecast
