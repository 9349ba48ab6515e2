#pragma once

#include "crossflow/sim/pipeline.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace crossflow::sim {

struct ScenarioFile {
    ScenarioParams params;
    PipelineState initial;
};

// Flat key/value text, one `key = value` per line, `#` comments. Keys are the
// eight ScenarioParams fields plus optional initial occupancies keyed by
// stage (`sheltered = 250`). Unknown or repeated keys are rejected.
ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario(const std::filesystem::path& path);

std::string to_scenario_text(const ScenarioFile& scenario);

// day,stage,occupancy
void write_occupancy_csv(std::ostream& out, const SimulationTrace& trace);
// day,from,to,amount
void write_flows_csv(std::ostream& out, const SimulationTrace& trace);

}  // namespace crossflow::sim
