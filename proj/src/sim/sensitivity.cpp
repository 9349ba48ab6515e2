#include "crossflow/sim/sensitivity.hpp"

#include "crossflow/common/error.hpp"

namespace crossflow::sim {

SweepResult sensitivity_sweep(const ScenarioParams& base, const std::string& parameter,
                              const std::vector<double>& grid, const PipelineState& initial) {
    if (!is_planner_parameter(parameter)) {
        throw ValidationError("param", "unknown parameter '" + parameter + "'");
    }
    if (grid.empty()) throw ValidationError("grid", "grid must contain at least one value");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            validate_planner_value(parameter, grid[i]);
        } catch (const ValidationError& e) {
            throw ValidationError("grid[" + std::to_string(i) + "]", e.what());
        }
    }

    SweepResult result{parameter, {}};
    for (double value : grid) {
        if (result.sheltered.count(value)) continue;
        auto trace = simulate(initial, with_planner_value(base, parameter, value));
        result.sheltered.emplace(value, trace.series(Stage::Sheltered));
    }
    return result;
}

std::map<double, double> snapshot_at(const SweepResult& sweep, int day) {
    std::map<double, double> out;
    for (const auto& [value, series] : sweep.sheltered) {
        if (day < 0 || static_cast<std::size_t>(day) >= series.size()) {
            throw ValidationError("snapshot_day", "snapshot day " + std::to_string(day) + " outside 0.." +
                                                      std::to_string(series.size() - 1));
        }
        out.emplace(value, series[static_cast<std::size_t>(day)]);
    }
    return out;
}

}  // namespace crossflow::sim
