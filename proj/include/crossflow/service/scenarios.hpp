#pragma once

#include "crossflow/service/codec.hpp"

#include <map>
#include <string>

namespace crossflow::service {

struct SliderRange {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;
    double default_value = 0.0;
};

// Keyed by planner parameter name.
using SliderRanges = std::map<std::string, SliderRange>;

// Ranges offered by the planner console for each of the six parameters.
const SliderRanges& default_slider_ranges();

// min < max, step > 0, min <= default <= max; fields "sliders.<param>.<key>".
void validate(const SliderRanges& sliders);

json to_json(const SliderRanges& sliders);
// Partial documents override `base` per parameter and per key.
SliderRanges sliders_from_json(const json& doc, SliderRanges base = default_slider_ranges());

// A named, persisted scenario together with the slider ranges it is edited
// under. The parameters must lie inside those ranges.
struct ScenarioDocument {
    std::string id;
    std::string name;
    sim::ScenarioParams params;
    sim::PipelineState initial;
    SliderRanges sliders = default_slider_ranges();
    std::string created_at;
    std::string updated_at;
};

json to_json(const ScenarioDocument& doc);
ScenarioDocument scenario_document_from_json(const json& doc);

// Body of POST/PUT /v1/scenarios: {name, params, initial?, sliders?}.
ScenarioDocument scenario_from_request(const json& body);

}  // namespace crossflow::service
