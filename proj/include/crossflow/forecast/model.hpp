#pragma once

#include "crossflow/forecast/cv.hpp"
#include "crossflow/forecast/features.hpp"
#include "crossflow/forecast/regressor.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace crossflow::forecast {

struct ModelSpec {
    std::string name;  // unique within an ensemble; defaults to kind
    std::string kind;
    std::vector<Hyperparameters> grid;
};

struct TrainedModel {
    std::string name;
    std::string kind;
    Hyperparameters hyperparameters;
    std::vector<std::string> columns;  // empty: accepts any schema
    std::shared_ptr<const Regressor> regressor;
    double cv_mse = 0.0;
    std::optional<double> test_rmse;
    std::optional<double> test_mae;
    std::uint64_t seed = 0;
    std::optional<DateRange> trained_on;
    std::vector<double> residuals;  // in-sample, y - clipped prediction
};

// The five default families with their search grids.
std::vector<ModelSpec> default_model_specs();

// Grid search with blocked CV: the hyperparameters minimizing mean
// validation MSE win (ties go to the earlier grid entry), then the model is
// refit on every row.
TrainedModel fit_model(const ModelSpec& spec, const FeatureMatrix& matrix, const CvConfig& cv, std::uint64_t seed);

// Fits `model`'s family with its chosen hyperparameters on new rows.
TrainedModel refit(const TrainedModel& model, const FeatureMatrix& matrix);

// Constant predictor at the mean of `train_y`.
TrainedModel baseline_historical_mean(const Eigen::VectorXd& train_y);

// Predictions clipped below at zero. Throws ValidationError when the rows'
// columns differ from the training schema.
std::vector<double> predict(const TrainedModel& model, const FeatureMatrix& rows);

struct Metrics {
    double rmse = 0.0;
    double mae = 0.0;
};

Metrics evaluate(const std::vector<double>& pred, const std::vector<double>& truth);

std::vector<double> to_vector(const Eigen::VectorXd& v);

}  // namespace crossflow::forecast
