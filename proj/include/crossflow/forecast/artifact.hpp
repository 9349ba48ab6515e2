#pragma once

#include "crossflow/forecast/pipeline.hpp"

#include <filesystem>
#include <iosfwd>

namespace crossflow::forecast {

inline constexpr int kArtifactVersion = 1;

nlohmann::json to_json(const TrainedModel& model);
TrainedModel trained_model_from_json(const nlohmann::json& doc);

// Versioned document: config, per-model kind/hyperparameters/fitted
// parameters/metrics/seed/training range, weights and a model card.
nlohmann::json to_json(const EnsembleArtifact& artifact);
EnsembleArtifact artifact_from_json(const nlohmann::json& doc);

void save_artifact(const EnsembleArtifact& artifact, const std::filesystem::path& path);
EnsembleArtifact load_artifact(const std::filesystem::path& path);

nlohmann::json to_json(const EnsembleForecast& forecast);
nlohmann::json to_json(const ModelReport& report);

// date,truth,<model>...,point,lower,upper
void write_forecast_csv(std::ostream& out, const EnsembleForecast& forecast);

}  // namespace crossflow::forecast
