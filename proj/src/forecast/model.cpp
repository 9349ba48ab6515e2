#include "crossflow/forecast/model.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/common/rng.hpp"
#include "crossflow/forecast/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crossflow::forecast {

namespace {

std::vector<double> clipped(const Eigen::VectorXd& raw) {
    std::vector<double> out(static_cast<std::size_t>(raw.size()));
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        const double v = raw(i);
        if (!std::isfinite(v)) throw StateError("model produced a non-finite prediction");
        out[static_cast<std::size_t>(i)] = std::max(0.0, v);
    }
    return out;
}

std::vector<double> in_sample_residuals(const Regressor& reg, const FeatureMatrix& m) {
    const auto pred = clipped(reg.predict_raw(m.X));
    std::vector<double> res(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) res[i] = m.y(static_cast<Eigen::Index>(i)) - pred[i];
    return res;
}

void require_fit_matrix(const FeatureMatrix& m) {
    if (m.rows() == 0) throw ValidationError("matrix", "feature matrix has no rows");
    if (!m.y.allFinite()) throw ValidationError("matrix.y", "training labels must be finite");
    if (!m.X.allFinite()) throw ValidationError("matrix.X", "features must be finite");
}

std::optional<DateRange> date_span(const FeatureMatrix& m) {
    if (m.dates.empty()) return std::nullopt;
    return DateRange{m.dates.front(), m.dates.back()};
}

}  // namespace

std::vector<ModelSpec> default_model_specs() {
    std::vector<ModelSpec> specs;
    specs.push_back({"ridge", "ridge", {{{"alpha", 0.0}}, {{"alpha", 0.1}}, {{"alpha", 1.0}}, {{"alpha", 10.0}},
                                        {{"alpha", 100.0}}}});
    specs.push_back({"lasso", "lasso", {{{"alpha", 0.01}}, {{"alpha", 0.1}}, {{"alpha", 1.0}}, {{"alpha", 10.0}},
                                        {{"alpha", 100.0}}}});
    ModelSpec tree{"decision_tree", "decision_tree", {}};
    for (double depth : {2.0, 3.0, 4.0, 6.0}) tree.grid.push_back({{"max_depth", depth}, {"min_samples_leaf", 3.0}});
    specs.push_back(tree);
    ModelSpec forest{"random_forest", "random_forest", {}};
    for (double depth : {4.0, 8.0}) {
        for (double feat : {0.5, 1.0}) {
            forest.grid.push_back(
                {{"n_estimators", 100.0}, {"max_depth", depth}, {"max_features", feat}, {"min_samples_leaf", 2.0}});
        }
    }
    specs.push_back(forest);
    ModelSpec gbm{"gradient_boosting", "gradient_boosting", {}};
    for (double lr : {0.05, 0.1}) {
        for (double depth : {2.0, 3.0}) {
            gbm.grid.push_back({{"n_estimators", 100.0}, {"learning_rate", lr}, {"max_depth", depth}, {"subsample", 0.8}});
        }
    }
    specs.push_back(gbm);
    return specs;
}

TrainedModel fit_model(const ModelSpec& spec, const FeatureMatrix& matrix, const CvConfig& cv, std::uint64_t seed) {
    require_fit_matrix(matrix);
    if (spec.grid.empty()) throw ValidationError("grid", "hyperparameter grid for '" + spec.name + "' is empty");
    make_regressor(spec.kind);  // rejects unknown kinds before any work

    const auto folds = blocked_cv_split(matrix.rows(), cv.folds);
    std::vector<FeatureMatrix> train_parts, val_parts;
    for (const auto& f : folds) {
        train_parts.push_back(matrix.slice(f.train));
        val_parts.push_back(matrix.slice(f.validation));
    }

    std::size_t best = 0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
        double total = 0.0;
        for (std::size_t f = 0; f < folds.size(); ++f) {
            auto reg = make_regressor(spec.kind);
            reg->fit(train_parts[f].X, train_parts[f].y, spec.grid[g], derive_seed(seed, f));
            const auto pred = clipped(reg->predict_raw(val_parts[f].X));
            double sse = 0.0;
            for (std::size_t i = 0; i < pred.size(); ++i) {
                const double e = pred[i] - val_parts[f].y(static_cast<Eigen::Index>(i));
                sse += e * e;
            }
            total += sse / static_cast<double>(pred.size());
        }
        const double mse = total / static_cast<double>(folds.size());
        if (mse < best_mse) {
            best_mse = mse;
            best = g;
        }
    }

    TrainedModel model;
    model.name = spec.name.empty() ? spec.kind : spec.name;
    model.kind = spec.kind;
    model.hyperparameters = spec.grid[best];
    model.cv_mse = best_mse;
    model.seed = seed;
    model.columns = matrix.columns;
    return refit(model, matrix);
}

TrainedModel refit(const TrainedModel& model, const FeatureMatrix& matrix) {
    require_fit_matrix(matrix);
    auto reg = make_regressor(model.kind);
    reg->fit(matrix.X, matrix.y, model.hyperparameters, model.seed);
    TrainedModel out = model;
    out.residuals = in_sample_residuals(*reg, matrix);
    out.regressor = std::move(reg);
    out.trained_on = date_span(matrix);
    if (!out.columns.empty() || out.kind != "historical_mean") out.columns = matrix.columns;
    return out;
}

TrainedModel baseline_historical_mean(const Eigen::VectorXd& train_y) {
    if (train_y.size() == 0) throw ValidationError("y", "historical mean needs at least one training value");
    auto reg = std::make_unique<HistoricalMean>();
    reg->fit(Eigen::MatrixXd(train_y.size(), 0), train_y, {}, 0);
    TrainedModel m;
    m.name = "historical_mean";
    m.kind = "historical_mean";
    m.residuals.resize(static_cast<std::size_t>(train_y.size()));
    for (Eigen::Index i = 0; i < train_y.size(); ++i) m.residuals[static_cast<std::size_t>(i)] = train_y(i) - reg->mean();
    m.regressor = std::move(reg);
    return m;
}

std::vector<double> predict(const TrainedModel& model, const FeatureMatrix& rows) {
    if (!model.regressor) throw ValidationError("model", "model '" + model.name + "' is not fitted");
    if (!model.columns.empty() && model.columns != rows.columns) {
        throw ValidationError("columns", "feature schema does not match model '" + model.name + "'");
    }
    if (rows.rows() == 0) return {};
    return clipped(model.regressor->predict_raw(rows.X));
}

Metrics evaluate(const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size()) throw ValidationError("truth", "prediction and truth lengths differ");
    if (pred.empty()) throw ValidationError("truth", "nothing to evaluate");
    double sse = 0.0, sae = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - truth[i];
        if (!std::isfinite(e)) throw ValidationError("truth", "non-finite value at position " + std::to_string(i));
        sse += e * e;
        sae += std::abs(e);
    }
    const auto n = static_cast<double>(pred.size());
    Metrics m{std::sqrt(sse / n), sae / n};
    // Rounding can invert the power-mean inequality by an ulp.
    m.rmse = std::max(m.rmse, m.mae);
    return m;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace crossflow::forecast
