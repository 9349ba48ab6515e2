#include "crossflow/sim/pipeline.hpp"

#include "crossflow/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace crossflow::sim {

double PipelineState::total() const { return std::accumulate(occupancy.begin(), occupancy.end(), 0.0); }

std::vector<double> SimulationTrace::series(Stage s) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& st : states) out.push_back(st[s]);
    return out;
}

void validate(const PipelineState& state) {
    for (Stage s : kAllStages) {
        const double v = state[s];
        if (!std::isfinite(v)) {
            throw StateError("non-finite occupancy in " + std::string(stage_name(s)) + " on day " +
                             std::to_string(state.day));
        }
        if (v < 0.0) {
            throw StateError("negative occupancy in " + std::string(stage_name(s)) + " on day " +
                             std::to_string(state.day));
        }
    }
    if (state.day < 0) throw StateError("negative day");
}

StepResult step(const PipelineState& state, const ScenarioParams& params) {
    validate(params);
    validate(state);

    StepResult r{state, {}};
    PipelineState& next = r.state;
    next.day = state.day + 1;
    r.flows.reserve(5);
    auto move = [&](Stage from, Stage to, double amount) {
        next[from] -= amount;
        next[to] += amount;
        r.flows.push_back({next.day, from, to, amount});
    };

    move(Stage::Sheltered, Stage::Relocated, std::min(params.relocation_capacity, state[Stage::Sheltered]));

    // Processing empties completely; the remainder is computed by difference
    // so the split conserves mass exactly.
    const double processed = state[Stage::Processing];
    const double to_shelter = params.special_needs_fraction * processed;
    move(Stage::Processing, Stage::Sheltered, to_shelter);
    move(Stage::Processing, Stage::SelfSettled, processed - to_shelter);
    next[Stage::Processing] = 0.0;

    move(Stage::AtBorder, Stage::Processing, std::min(params.registration_capacity, state[Stage::AtBorder]));
    move(Stage::WantToLeave, Stage::AtBorder, std::min(params.arrival_rate, state[Stage::WantToLeave]));

    next[Stage::WantToLeave] += params.latent_demand;
    next[Stage::Sheltered] += params.extra_shelter_requests;

    validate(next);
    return r;
}

SimulationTrace simulate(const PipelineState& initial, const ScenarioParams& params) {
    validate(params);
    validate(initial);
    SimulationTrace trace;
    trace.states.reserve(static_cast<std::size_t>(params.horizon) + 1);
    trace.flows.reserve(static_cast<std::size_t>(params.horizon) * 5);
    trace.states.push_back(initial);
    for (int t = 0; t < params.horizon; ++t) {
        auto r = step(trace.states.back(), params);
        trace.states.push_back(r.state);
        trace.flows.insert(trace.flows.end(), r.flows.begin(), r.flows.end());
    }
    return trace;
}

}  // namespace crossflow::sim
