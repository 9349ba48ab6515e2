#pragma once

#include "crossflow/forecast/model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace crossflow::forecast {

using Weights = std::map<std::string, double>;

struct NamedRmse {
    std::string name;
    double rmse = 0.0;
};

// Inverse-RMSE weights normalized to sum to one. Models with RMSE exactly 0
// share all of the weight equally.
Weights ensemble_weights(const std::vector<NamedRmse>& models);

// Per-row weighted mean of component predictions keyed by model name.
std::vector<double> ensemble_predict(const std::map<std::string, std::vector<double>>& predictions,
                                     const Weights& weights);

// Convenience overload predicting every model on `rows` first.
std::vector<double> ensemble_predict(const std::vector<TrainedModel>& models, const Weights& weights,
                                     const FeatureMatrix& rows);

struct BootstrapConfig {
    int replicates = 1000;
    double level = 0.80;
    std::uint64_t seed = 0;
};

void validate(const BootstrapConfig& cfg);

struct Interval {
    std::vector<double> lower;
    std::vector<double> upper;
};

// Residual bootstrap around fixed point predictions: each replicate adds a
// residual drawn with replacement to every point; the interval is the
// empirical (1-level)/2 and (1+level)/2 quantiles per row (linear
// interpolation between order statistics). Bounds are widened to contain
// the point and the lower bound is clipped at zero.
Interval residual_bootstrap(const std::vector<double>& points, const std::vector<double>& residuals,
                            const BootstrapConfig& cfg);

// Residuals are taken in-sample on `matrix`; requires at least 10 of them.
Interval bootstrap_intervals(const TrainedModel& model, const FeatureMatrix& matrix, const FeatureMatrix& rows,
                             const BootstrapConfig& cfg);

// Weighted mean of component bounds per row.
Interval ensemble_intervals(const std::map<std::string, Interval>& intervals, const Weights& weights);

// Sample quantile, linear interpolation between order statistics (type 7).
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace crossflow::forecast
