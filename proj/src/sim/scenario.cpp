#include "crossflow/sim/scenario.hpp"

#include "crossflow/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace crossflow::sim {

namespace {

void require_rate(const std::string& field, double v) {
    if (!std::isfinite(v)) throw ValidationError(field, field + " must be finite");
    if (v < 0.0) throw ValidationError(field, field + " must be >= 0");
}

double* planner_slot(ScenarioParams& p, std::string_view name) {
    if (name == "latent_demand") return &p.latent_demand;
    if (name == "arrival_rate") return &p.arrival_rate;
    if (name == "registration_capacity") return &p.registration_capacity;
    if (name == "special_needs_fraction") return &p.special_needs_fraction;
    if (name == "extra_shelter_requests") return &p.extra_shelter_requests;
    if (name == "relocation_capacity") return &p.relocation_capacity;
    return nullptr;
}

}  // namespace

void validate(const ScenarioParams& p) {
    require_rate("latent_demand", p.latent_demand);
    require_rate("arrival_rate", p.arrival_rate);
    require_rate("registration_capacity", p.registration_capacity);
    validate_planner_value("special_needs_fraction", p.special_needs_fraction);
    require_rate("extra_shelter_requests", p.extra_shelter_requests);
    require_rate("relocation_capacity", p.relocation_capacity);
    // +inf is the "no capacity configured" sentinel.
    if (std::isnan(p.shelter_capacity) || p.shelter_capacity < 0.0) {
        throw ValidationError("shelter_capacity", "shelter_capacity must be >= 0");
    }
    if (p.horizon < 1) throw ValidationError("horizon", "horizon must be >= 1");
}

bool is_planner_parameter(std::string_view name) {
    return std::find(kPlannerParameters.begin(), kPlannerParameters.end(), name) !=
           kPlannerParameters.end();
}

void validate_planner_value(std::string_view name, double value) {
    const std::string field(name);
    if (!is_planner_parameter(name)) throw ValidationError(field, "unknown parameter '" + field + "'");
    if (name == "special_needs_fraction") {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw ValidationError(field, "special_needs_fraction must lie in [0, 1]");
        }
        return;
    }
    require_rate(field, value);
}

double get_planner_value(const ScenarioParams& params, std::string_view name) {
    auto copy = params;
    double* slot = planner_slot(copy, name);
    if (!slot) throw ValidationError(std::string(name), "unknown parameter '" + std::string(name) + "'");
    return *slot;
}

ScenarioParams with_planner_value(ScenarioParams params, std::string_view name, double value) {
    validate_planner_value(name, value);
    *planner_slot(params, name) = value;
    return params;
}

}  // namespace crossflow::sim
