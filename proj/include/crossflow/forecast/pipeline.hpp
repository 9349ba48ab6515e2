#pragma once

#include "crossflow/forecast/ensemble.hpp"
#include "crossflow/forecast/features.hpp"
#include "crossflow/forecast/model.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace crossflow::forecast {

struct ForecastConfig {
    FeatureSpec features;
    CvConfig cv;
    BootstrapConfig bootstrap;
    std::vector<ModelSpec> models = default_model_specs();
    // Rows dated on or after this feature date form the test split. When
    // unset, the last `test_fraction` of rows is held out.
    std::optional<Date> test_start;
    double test_fraction = 0.3;
    std::uint64_t seed = 0;
};

ForecastConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ForecastConfig& cfg);

struct ModelReport {
    std::string name;
    std::string kind;
    Hyperparameters hyperparameters;
    double cv_mse = 0.0;
    double test_rmse = 0.0;
    double test_mae = 0.0;
    double weight = 0.0;
};

// One row per forecast target date.
struct ForecastRow {
    Date date;
    std::optional<double> truth;
    std::map<std::string, double> per_model;
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct EnsembleForecast {
    std::vector<std::string> models;
    Weights weights;
    double level = 0.8;
    std::vector<ForecastRow> rows;
};

struct EnsembleArtifact {
    ForecastConfig config;
    std::vector<TrainedModel> models;  // refit on every labelled row
    TrainedModel baseline;
    Weights weights;
    std::vector<ModelReport> reports;  // registry models then the baseline
    Metrics ensemble_test;
    DateRange train_rows;
    DateRange test_rows;
};

struct TrainingResult {
    EnsembleArtifact artifact;
    EnsembleForecast forecast;
};

// Builds target and features, fits every registry model on the train split
// with blocked CV, scores each on the test split against the historical-mean
// baseline, weights by inverse test RMSE, refits on all rows and forecasts
// the dates beyond the data with bootstrap intervals. The returned forecast
// covers the test dates (out-of-sample) followed by the future dates.
TrainingResult train_ensemble(const DailySeries& arrivals, const std::vector<ingest::IndicatorSeries>& indicators,
                              const ForecastConfig& config);

// Forecast for the dates beyond the data using a stored artifact.
EnsembleForecast forecast_ahead(const EnsembleArtifact& artifact, const DailySeries& arrivals,
                                const std::vector<ingest::IndicatorSeries>& indicators);

}  // namespace crossflow::forecast
