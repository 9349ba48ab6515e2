#pragma once

#include "crossflow/sim/stage.hpp"

#include <array>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace crossflow::sim {

// Planner-controlled inputs. Rates are persons/day.
struct ScenarioParams {
    double latent_demand = 0.0;           // added to WantToLeave each day
    double arrival_rate = 0.0;            // cap on WantToLeave -> AtBorder
    double registration_capacity = 0.0;   // cap on AtBorder -> Processing
    double special_needs_fraction = 0.0;  // share of Processing routed to shelter
    double extra_shelter_requests = 0.0;  // added straight to Sheltered
    double relocation_capacity = 0.0;     // cap on Sheltered -> Relocated
    // Reporting threshold only; +inf when not configured.
    double shelter_capacity = std::numeric_limits<double>::infinity();
    int horizon = 1;                      // days

    bool operator==(const ScenarioParams&) const = default;
};

// The six parameters a planner can sweep, in slider order.
inline constexpr std::array<std::string_view, 6> kPlannerParameters = {
    "latent_demand",          "arrival_rate",        "registration_capacity",
    "special_needs_fraction", "extra_shelter_requests", "relocation_capacity",
};

// Throws ValidationError naming the first offending field.
void validate(const ScenarioParams& params);

// Throws ValidationError(field = name) for an unknown planner parameter or a
// value outside that parameter's domain.
void validate_planner_value(std::string_view name, double value);

bool is_planner_parameter(std::string_view name);

double get_planner_value(const ScenarioParams& params, std::string_view name);
ScenarioParams with_planner_value(ScenarioParams params, std::string_view name, double value);

}  // namespace crossflow::sim
