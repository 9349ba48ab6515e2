#pragma once

#include "crossflow/sim/analysis.hpp"
#include "crossflow/sim/pipeline.hpp"
#include "crossflow/sim/scenario.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace crossflow::service {

using nlohmann::json;

// Decoders are strict: unknown keys and wrong types raise ValidationError with
// a field path rooted at `path`.
sim::ScenarioParams params_from_json(const json& doc, const std::string& path = "params");
sim::PipelineState initial_from_json(const json& doc, const std::string& path = "initial");
std::vector<sim::ContingencyRule> rules_from_json(const json& doc, const std::string& path = "rules");

// shelter_capacity = +inf is written as null.
json to_json(const sim::ScenarioParams& params);
json to_json(const sim::PipelineState& state);
json to_json(const sim::ContingencyRule& rule);

// {"horizon", "occupancy": {stage: [day 0..h]}, "flows": [{day, from, to, amount}]}
json trace_to_json(const sim::SimulationTrace& trace);

struct SimulateRequest {
    sim::ScenarioParams params;
    sim::PipelineState initial;
    std::vector<sim::ContingencyRule> rules;
};

SimulateRequest simulate_request_from_json(const json& body);
json simulate_response(const SimulateRequest& request);

struct SensitivityRequest {
    sim::ScenarioParams base;
    sim::PipelineState initial;
    std::string param;
    std::vector<double> grid;
    std::optional<int> snapshot_day;  // defaults to the horizon
};

SensitivityRequest sensitivity_request_from_json(const json& body);
json sensitivity_response(const SensitivityRequest& request);

// Reads a required/optional member with a type check.
double number_at(const json& obj, const std::string& key, const std::string& path);
std::string string_at(const json& obj, const std::string& key, const std::string& path);
void require_object(const json& doc, const std::string& path);
void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& path);

// Longest horizon accepted over the API.
inline constexpr int kMaxHorizon = 36500;

}  // namespace crossflow::service
