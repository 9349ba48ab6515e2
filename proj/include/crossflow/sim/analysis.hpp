#pragma once

#include "crossflow/sim/pipeline.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace crossflow::sim {

struct Overflow {
    int first_day = 0;
    double peak_exceedance = 0.0;  // max over days of Sheltered - capacity
    int peak_day = 0;
};

// First day Sheltered strictly exceeds `shelter_capacity`. An infinite
// capacity never overflows.
std::optional<Overflow> shelter_overflow(const SimulationTrace& trace, double shelter_capacity);

struct Bottleneck {
    Stage stage = Stage::WantToLeave;
    double growth_per_day = 0.0;
};

// Non-terminal stages with positive average net growth, largest first.
//
// Growth is measured over the trailing half of the trace (days
// floor(h/2)..h) so the initial fill of an empty pipeline is not mistaken
// for a backlog. A growth of at most `tolerance` persons/day counts as flat.
std::vector<Bottleneck> bottlenecks(const SimulationTrace& trace, double tolerance = 1e-9);

struct ContingencyRule {
    std::string id;
    Stage metric = Stage::Sheltered;
    double threshold = 0.0;
    std::string label;
};

struct TriggerHit {
    std::string rule_id;
    int first_day = 0;

    bool operator==(const TriggerHit&) const = default;
};

// One hit per rule whose metric strictly exceeds its threshold on some day,
// in rule order. Throws ValidationError on duplicate ids or a negative
// threshold.
std::vector<TriggerHit> evaluate_triggers(const SimulationTrace& trace,
                                          const std::vector<ContingencyRule>& rules);

}  // namespace crossflow::sim
