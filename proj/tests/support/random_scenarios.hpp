#pragma once

#include "crossflow/sim/pipeline.hpp"

#include <random>

namespace crossflow::testing {

// Random valid scenario. Rates span four orders of magnitude and some are
// forced to exactly zero so boundary behaviour gets exercised.
inline sim::ScenarioParams random_params(std::mt19937_64& rng, int horizon) {
    std::uniform_real_distribution<double> log_rate(-1.0, 3.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto rate = [&] { return unit(rng) < 0.1 ? 0.0 : std::pow(10.0, log_rate(rng)); };
    sim::ScenarioParams p;
    p.latent_demand = rate();
    p.arrival_rate = rate();
    p.registration_capacity = rate();
    p.special_needs_fraction = unit(rng) < 0.1 ? (unit(rng) < 0.5 ? 0.0 : 1.0) : unit(rng);
    p.extra_shelter_requests = rate();
    p.relocation_capacity = rate();
    p.shelter_capacity = rate() * 10;
    p.horizon = horizon;
    return p;
}

inline sim::PipelineState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> occ(0.0, 5000.0);
    sim::PipelineState s;
    for (auto& v : s.occupancy) v = occ(rng);
    return s;
}

}  // namespace crossflow::testing
