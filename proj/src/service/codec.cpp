#include "crossflow/service/codec.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/sim/sensitivity.hpp"
#include "crossflow/sim/stage.hpp"

#include <algorithm>
#include <cmath>

namespace crossflow::service {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Rethrows a library validation error under `path`.
template <class F>
auto prefixed(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        throw ValidationError(join(path, e.field()), e.what());
    }
}

const std::vector<std::string> kParamKeys = {
    "latent_demand",          "arrival_rate",        "registration_capacity", "special_needs_fraction",
    "extra_shelter_requests", "relocation_capacity", "shelter_capacity",      "horizon",
};

int horizon_at(const json& obj, const std::string& path) {
    const auto field = join(path, "horizon");
    if (!obj.contains("horizon")) throw ValidationError(field, "horizon is required");
    const auto& h = obj["horizon"];
    if (!h.is_number()) throw ValidationError(field, "horizon must be an integer");
    const double v = h.get<double>();
    if (v != std::floor(v) || v < 1 || v > kMaxHorizon) {
        throw ValidationError(field, "horizon must be an integer in 1.." + std::to_string(kMaxHorizon));
    }
    return static_cast<int>(v);
}

}  // namespace

void require_object(const json& doc, const std::string& path) {
    if (!doc.is_object()) throw ValidationError(path.empty() ? "body" : path, "expected a JSON object");
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ValidationError(join(path, key), "unknown field '" + key + "'");
        }
    }
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
    const auto field = join(path, key);
    if (!obj.contains(key)) throw ValidationError(field, key + " is required");
    const auto& v = obj[key];
    if (!v.is_number()) throw ValidationError(field, key + " must be a number");
    return v.get<double>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& path) {
    const auto field = join(path, key);
    if (!obj.contains(key)) throw ValidationError(field, key + " is required");
    if (!obj[key].is_string()) throw ValidationError(field, key + " must be a string");
    return obj[key].get<std::string>();
}

sim::ScenarioParams params_from_json(const json& doc, const std::string& path) {
    require_object(doc, path);
    reject_unknown_keys(doc, kParamKeys, path);
    sim::ScenarioParams p;
    auto opt = [&](const char* key, double& slot) {
        if (doc.contains(key)) slot = number_at(doc, key, path);
    };
    opt("latent_demand", p.latent_demand);
    opt("arrival_rate", p.arrival_rate);
    opt("registration_capacity", p.registration_capacity);
    opt("special_needs_fraction", p.special_needs_fraction);
    opt("extra_shelter_requests", p.extra_shelter_requests);
    opt("relocation_capacity", p.relocation_capacity);
    if (doc.contains("shelter_capacity") && !doc["shelter_capacity"].is_null()) {
        p.shelter_capacity = number_at(doc, "shelter_capacity", path);
    }
    p.horizon = horizon_at(doc, path);
    prefixed(path, [&] { sim::validate(p); });
    return p;
}

sim::PipelineState initial_from_json(const json& doc, const std::string& path) {
    sim::PipelineState state;
    if (doc.is_null()) return state;
    require_object(doc, path);
    for (const auto& [key, value] : doc.items()) {
        const auto field = join(path, key);
        const auto stage = sim::parse_stage(key);
        if (!stage) throw ValidationError(field, "unknown stage '" + key + "'");
        if (!value.is_number()) throw ValidationError(field, "occupancy must be a number");
        const double v = value.get<double>();
        if (!std::isfinite(v) || v < 0.0) throw ValidationError(field, "occupancy must be finite and >= 0");
        state[*stage] = v;
    }
    return state;
}

std::vector<sim::ContingencyRule> rules_from_json(const json& doc, const std::string& path) {
    std::vector<sim::ContingencyRule> rules;
    if (doc.is_null()) return rules;
    if (!doc.is_array()) throw ValidationError(path, "rules must be an array");
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto item_path = path + "[" + std::to_string(i) + "]";
        const auto& r = doc[i];
        require_object(r, item_path);
        reject_unknown_keys(r, {"id", "metric", "threshold", "label"}, item_path);
        sim::ContingencyRule rule;
        rule.id = string_at(r, "id", item_path);
        if (r.contains("metric")) {
            const auto metric = string_at(r, "metric", item_path);
            const auto stage = sim::parse_stage(metric);
            if (!stage) throw ValidationError(item_path + ".metric", "unknown stage '" + metric + "'");
            rule.metric = *stage;
        }
        rule.threshold = number_at(r, "threshold", item_path);
        if (r.contains("label")) rule.label = string_at(r, "label", item_path);
        rules.push_back(std::move(rule));
    }
    // Duplicate ids and negative thresholds are checked by evaluate_triggers;
    // surface them here with the same paths.
    prefixed("", [&] { sim::evaluate_triggers(sim::SimulationTrace{{sim::PipelineState{}}, {}}, rules); });
    return rules;
}

json to_json(const sim::ScenarioParams& p) {
    return {
        {"latent_demand", p.latent_demand},
        {"arrival_rate", p.arrival_rate},
        {"registration_capacity", p.registration_capacity},
        {"special_needs_fraction", p.special_needs_fraction},
        {"extra_shelter_requests", p.extra_shelter_requests},
        {"relocation_capacity", p.relocation_capacity},
        {"shelter_capacity", std::isinf(p.shelter_capacity) ? json(nullptr) : json(p.shelter_capacity)},
        {"horizon", p.horizon},
    };
}

json to_json(const sim::PipelineState& state) {
    json out = json::object();
    for (auto s : sim::kAllStages) out[std::string(sim::stage_key(s))] = state[s];
    return out;
}

json to_json(const sim::ContingencyRule& rule) {
    return {{"id", rule.id},
            {"metric", std::string(sim::stage_key(rule.metric))},
            {"threshold", rule.threshold},
            {"label", rule.label}};
}

json trace_to_json(const sim::SimulationTrace& trace) {
    json occupancy = json::object();
    for (auto s : sim::kAllStages) occupancy[std::string(sim::stage_key(s))] = trace.series(s);
    json flows = json::array();
    for (const auto& f : trace.flows) {
        flows.push_back({{"day", f.day},
                         {"from", std::string(sim::stage_key(f.from))},
                         {"to", std::string(sim::stage_key(f.to))},
                         {"amount", f.amount}});
    }
    return {{"horizon", trace.horizon()}, {"occupancy", occupancy}, {"flows", flows}};
}

SimulateRequest simulate_request_from_json(const json& body) {
    require_object(body, "");
    reject_unknown_keys(body, {"params", "initial", "rules"}, "");
    if (!body.contains("params")) throw ValidationError("params", "params is required");
    SimulateRequest req;
    req.params = params_from_json(body["params"], "params");
    if (body.contains("initial")) req.initial = initial_from_json(body["initial"], "initial");
    if (body.contains("rules")) req.rules = rules_from_json(body["rules"], "rules");
    return req;
}

json simulate_response(const SimulateRequest& req) {
    const auto trace = sim::simulate(req.initial, req.params);

    json overflow = nullptr;
    if (auto o = sim::shelter_overflow(trace, req.params.shelter_capacity)) {
        overflow = {{"first_day", o->first_day}, {"peak_exceedance", o->peak_exceedance}, {"peak_day", o->peak_day}};
    }
    json necks = json::array();
    for (const auto& b : sim::bottlenecks(trace)) {
        necks.push_back({{"stage", std::string(sim::stage_key(b.stage))}, {"growth_per_day", b.growth_per_day}});
    }
    json triggers = json::array();
    for (const auto& hit : sim::evaluate_triggers(trace, req.rules)) {
        const auto rule = std::find_if(req.rules.begin(), req.rules.end(),
                                       [&](const auto& r) { return r.id == hit.rule_id; });
        triggers.push_back({{"rule_id", hit.rule_id}, {"first_day", hit.first_day}, {"label", rule->label}});
    }
    return {{"params", to_json(req.params)},
            {"initial", to_json(req.initial)},
            {"trace", trace_to_json(trace)},
            {"overflow", overflow},
            {"bottlenecks", necks},
            {"triggers", triggers}};
}

SensitivityRequest sensitivity_request_from_json(const json& body) {
    require_object(body, "");
    reject_unknown_keys(body, {"params", "initial", "param", "grid", "snapshot_day"}, "");
    if (!body.contains("params")) throw ValidationError("params", "params is required");
    SensitivityRequest req;
    req.base = params_from_json(body["params"], "params");
    if (body.contains("initial")) req.initial = initial_from_json(body["initial"], "initial");
    req.param = string_at(body, "param", "");
    if (!sim::is_planner_parameter(req.param)) throw ValidationError("param", "unknown parameter '" + req.param + "'");
    if (!body.contains("grid") || !body["grid"].is_array()) throw ValidationError("grid", "grid must be an array");
    const auto& grid = body["grid"];
    if (grid.empty()) throw ValidationError("grid", "grid must contain at least one value");
    if (grid.size() > 1000) throw ValidationError("grid", "grid is limited to 1000 values");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!grid[i].is_number()) throw ValidationError("grid[" + std::to_string(i) + "]", "grid values must be numbers");
        req.grid.push_back(grid[i].get<double>());
    }
    if (body.contains("snapshot_day") && !body["snapshot_day"].is_null()) {
        const auto& s = body["snapshot_day"];
        if (!s.is_number() || s.get<double>() != std::floor(s.get<double>()) || std::abs(s.get<double>()) > 1e9) {
            throw ValidationError("snapshot_day", "snapshot_day must be an integer");
        }
        req.snapshot_day = static_cast<int>(s.get<double>());
    }
    return req;
}

json sensitivity_response(const SensitivityRequest& req) {
    const auto sweep = sim::sensitivity_sweep(req.base, req.param, req.grid, req.initial);
    const int day = req.snapshot_day.value_or(req.base.horizon);
    const auto snap = sim::snapshot_at(sweep, day);

    json series = json::array();
    for (const auto& [value, sheltered] : sweep.sheltered) series.push_back({{"value", value}, {"sheltered", sheltered}});
    json points = json::array();
    for (const auto& [value, sheltered] : snap) points.push_back({{"value", value}, {"sheltered", sheltered}});
    return {{"parameter", sweep.parameter},
            {"params", to_json(req.base)},
            {"series", series},
            {"snapshot", {{"day", day}, {"values", points}}}};
}

}  // namespace crossflow::service
