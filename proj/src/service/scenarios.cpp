#include "crossflow/service/scenarios.hpp"

#include "crossflow/common/error.hpp"

#include <cmath>

namespace crossflow::service {

const SliderRanges& default_slider_ranges() {
    static const SliderRanges ranges = {
        {"latent_demand", {0.0, 2000.0, 10.0, 500.0}},
        {"arrival_rate", {0.0, 2000.0, 10.0, 500.0}},
        {"registration_capacity", {0.0, 2000.0, 10.0, 300.0}},
        {"special_needs_fraction", {0.0, 1.0, 0.01, 0.1}},
        {"extra_shelter_requests", {0.0, 500.0, 5.0, 0.0}},
        {"relocation_capacity", {0.0, 1000.0, 5.0, 100.0}},
    };
    return ranges;
}

void validate(const SliderRanges& sliders) {
    for (const auto& [name, r] : sliders) {
        const std::string field = "sliders." + name;
        if (!sim::is_planner_parameter(name)) throw ValidationError(field, "unknown parameter '" + name + "'");
        if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.min < r.max)) {
            throw ValidationError(field + ".max", "slider needs finite min < max");
        }
        if (!std::isfinite(r.step) || !(r.step > 0.0)) throw ValidationError(field + ".step", "step must be > 0");
        if (!(r.default_value >= r.min && r.default_value <= r.max)) {
            throw ValidationError(field + ".default", "default must lie within [min, max]");
        }
        // The slider range may not reach outside the parameter's own domain.
        try {
            sim::validate_planner_value(name, r.min);
            sim::validate_planner_value(name, r.max);
        } catch (const ValidationError& e) {
            throw ValidationError(field, e.what());
        }
    }
}

json to_json(const SliderRanges& sliders) {
    json out = json::object();
    for (const auto& [name, r] : sliders) {
        out[name] = {{"min", r.min}, {"max", r.max}, {"step", r.step}, {"default", r.default_value}};
    }
    return out;
}

SliderRanges sliders_from_json(const json& doc, SliderRanges base) {
    if (doc.is_null()) return base;
    require_object(doc, "sliders");
    for (const auto& [name, item] : doc.items()) {
        const std::string path = "sliders." + name;
        if (!sim::is_planner_parameter(name)) throw ValidationError(path, "unknown parameter '" + name + "'");
        require_object(item, path);
        reject_unknown_keys(item, {"min", "max", "step", "default"}, path);
        auto& r = base[name];
        if (item.contains("min")) r.min = number_at(item, "min", path);
        if (item.contains("max")) r.max = number_at(item, "max", path);
        if (item.contains("step")) r.step = number_at(item, "step", path);
        if (item.contains("default")) r.default_value = number_at(item, "default", path);
    }
    validate(base);
    return base;
}

json to_json(const ScenarioDocument& doc) {
    return {{"id", doc.id},
            {"name", doc.name},
            {"params", to_json(doc.params)},
            {"initial", to_json(doc.initial)},
            {"sliders", to_json(doc.sliders)},
            {"created_at", doc.created_at},
            {"updated_at", doc.updated_at}};
}

ScenarioDocument scenario_document_from_json(const json& doc) {
    ScenarioDocument out = scenario_from_request(doc);
    out.id = doc.at("id").get<std::string>();
    out.created_at = doc.value("created_at", std::string());
    out.updated_at = doc.value("updated_at", out.created_at);
    return out;
}

ScenarioDocument scenario_from_request(const json& body) {
    require_object(body, "");
    reject_unknown_keys(body, {"id", "name", "params", "initial", "sliders", "created_at", "updated_at"}, "");
    ScenarioDocument doc;
    doc.name = string_at(body, "name", "");
    if (doc.name.empty()) throw ValidationError("name", "name must not be empty");
    if (!body.contains("params")) throw ValidationError("params", "params is required");
    doc.params = params_from_json(body["params"], "params");
    if (body.contains("initial")) doc.initial = initial_from_json(body["initial"], "initial");
    if (body.contains("sliders")) doc.sliders = sliders_from_json(body["sliders"]);
    for (const auto& [name, r] : doc.sliders) {
        const double v = sim::get_planner_value(doc.params, name);
        if (v < r.min || v > r.max) {
            throw ValidationError("params." + name, name + " lies outside its slider range [" +
                                                        std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
        }
    }
    return doc;
}

}  // namespace crossflow::service
