#pragma once

#include "crossflow/sim/scenario.hpp"
#include "crossflow/sim/stage.hpp"

#include <array>
#include <utility>
#include <vector>

namespace crossflow::sim {

struct PipelineState {
    std::array<double, kStageCount> occupancy{};
    int day = 0;

    double operator[](Stage s) const { return occupancy[index(s)]; }
    double& operator[](Stage s) { return occupancy[index(s)]; }

    double total() const;

    bool operator==(const PipelineState&) const = default;
};

struct FlowRecord {
    int day = 0;  // day on which the move completes (the post-step day)
    Stage from = Stage::WantToLeave;
    Stage to = Stage::WantToLeave;
    double amount = 0.0;

    bool operator==(const FlowRecord&) const = default;
};

struct SimulationTrace {
    std::vector<PipelineState> states;  // day 0..horizon
    std::vector<FlowRecord> flows;

    int horizon() const { return static_cast<int>(states.size()) - 1; }

    // Occupancy of one stage for every day.
    std::vector<double> series(Stage s) const;

    bool operator==(const SimulationTrace&) const = default;
};

struct StepResult {
    PipelineState state;
    std::vector<FlowRecord> flows;
};

// Throws StateError if any occupancy is negative or non-finite.
void validate(const PipelineState& state);

// Advances one day. Flows are evaluated right to left so nobody moves more
// than one stage per day:
//   Sheltered -> Relocated          min(relocation_capacity, Sheltered)
//   Processing -> Sheltered         special_needs_fraction * Processing
//   Processing -> SelfSettled       the rest of Processing
//   AtBorder -> Processing          min(registration_capacity, AtBorder)
//   WantToLeave -> AtBorder         min(arrival_rate, WantToLeave)
// then latent_demand joins WantToLeave and extra_shelter_requests joins
// Sheltered.
StepResult step(const PipelineState& state, const ScenarioParams& params);

SimulationTrace simulate(const PipelineState& initial, const ScenarioParams& params);

}  // namespace crossflow::sim
