#pragma once

#include "crossflow/sim/pipeline.hpp"

#include <map>
#include <string>
#include <vector>

namespace crossflow::sim {

// Sheltered occupancy series (days 0..horizon) per swept value.
struct SweepResult {
    std::string parameter;
    std::map<double, std::vector<double>> sheltered;
};

// One-at-a-time sweep: each grid value replaces `parameter` in `base`, all
// other parameters fixed. Duplicate grid values collapse to one entry.
SweepResult sensitivity_sweep(const ScenarioParams& base, const std::string& parameter,
                              const std::vector<double>& grid, const PipelineState& initial);

// Cross-section of a sweep on day `day`.
std::map<double, double> snapshot_at(const SweepResult& sweep, int day);

}  // namespace crossflow::sim
