#include "crossflow/ingest/registry.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/ingest/align.hpp"
#include "crossflow/ingest/parse.hpp"

#include <json.hpp>

#include <fstream>

namespace crossflow::ingest {

using nlohmann::json;

Registry load_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open registry " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("registry", std::string("malformed registry: ") + e.what());
    }
    return registry_from_json(doc, path.parent_path());
}

Registry registry_from_json(const json& doc, const std::filesystem::path& base) {
    Registry reg;
    if (!doc.is_object()) throw ValidationError("registry", "registry must be a JSON object");
    if (!doc.contains("sources") || !doc["sources"].is_array()) {
        throw ValidationError("sources", "registry needs a 'sources' array");
    }
    std::size_t i = 0;
    for (const auto& s : doc["sources"]) {
        const std::string field = "sources[" + std::to_string(i++) + "]";
        try {
            IndicatorSource src;
            src.id = s.at("id").get<std::string>();
            src.display_name = s.value("name", src.id);
            src.frequency = parse_frequency(s.value("frequency", std::string("daily")));
            src.units = s.value("units", std::string());
            src.value_column = s.value("value_column", std::string("value"));
            if (s.contains("content")) {
                src.content = s["content"].get<std::string>();
            } else {
                const std::filesystem::path file = s.at("file").get<std::string>();
                src.file = file.is_absolute() ? file : base / file;
            }
            const auto delim = s.value("delimiter", std::string(","));
            if (delim.size() != 1) throw ValidationError(field + ".delimiter", "delimiter must be one character");
            src.delimiter = delim[0];
            if (s.contains("max_gap")) src.max_gap = s["max_gap"].get<int>();
            for (const auto& other : reg.sources) {
                if (other.id == src.id) throw ValidationError(field + ".id", "duplicate source id '" + src.id + "'");
            }
            reg.sources.push_back(std::move(src));
        } catch (const json::exception& e) {
            throw ValidationError(field, std::string("bad source entry: ") + e.what());
        }
    }
    if (doc.contains("range")) {
        if (!doc["range"].is_object()) throw ValidationError("range", "range must be {start, end}");
        try {
            reg.range = DateRange{parse_date_or_throw(doc["range"].at("start").get<std::string>(), "range.start"),
                                  parse_date_or_throw(doc["range"].at("end").get<std::string>(), "range.end")};
        } catch (const json::exception&) {
            throw ValidationError("range", "range needs string 'start' and 'end' dates");
        }
    }
    if (doc.contains("moving_averages")) {
        try {
            reg.moving_average_windows = doc["moving_averages"].get<std::vector<int>>();
        } catch (const json::exception&) {
            throw ValidationError("moving_averages", "moving_averages must be a list of integers");
        }
    }
    return reg;
}

IngestResult ingest_all(const Registry& registry) {
    IngestResult result;
    std::vector<IndicatorSeries> series;
    for (const auto& src : registry.sources) {
        auto parsed = src.content ? parse_indicator_text(*src.content, src) : parse_indicator_file(src.file, src);
        const DateRange range = registry.range.value_or(
            DateRange{parsed.records.front().date,
                      add_days(parsed.records.back().date, native_period_days(src.frequency) - 1)});
        auto aligned = align_daily(parsed.records, src, range, src.effective_max_gap(), &parsed.report);
        for (int w : registry.moving_average_windows) series.push_back(moving_average(aligned, w));
        series.push_back(std::move(aligned));
        result.reports.push_back(std::move(parsed.report));
    }
    result.panel = build_panel(std::move(series), registry.range);
    return result;
}

}  // namespace crossflow::ingest
