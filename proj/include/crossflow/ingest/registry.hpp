#pragma once

#include "crossflow/ingest/indicator.hpp"
#include "crossflow/ingest/panel.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <vector>

namespace crossflow::ingest {

struct Registry {
    std::vector<IndicatorSource> sources;
    std::optional<DateRange> range;
    std::vector<int> moving_average_windows;  // extra derived columns per source
};

// JSON document:
//   {"sources": [{"id", "name", "file", "frequency", "units", "value_column",
//                 "delimiter"?, "max_gap"?}],
//    "range": {"start", "end"}?, "moving_averages": [7]?}
// Relative file paths resolve against the registry's directory.
Registry load_registry(const std::filesystem::path& path);
// Same document already parsed. A source may carry its text inline under
// "content" instead of "file".
Registry registry_from_json(const nlohmann::json& doc, const std::filesystem::path& base = {});

struct IngestResult {
    PanelBuild panel;
    std::vector<IngestReport> reports;
};

// Parse, align and assemble every source of the registry.
IngestResult ingest_all(const Registry& registry);

}  // namespace crossflow::ingest
