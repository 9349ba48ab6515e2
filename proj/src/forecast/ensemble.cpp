#include "crossflow/forecast/ensemble.hpp"

#include "crossflow/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace crossflow::forecast {

namespace {

void check_weights_cover(const Weights& weights, const std::set<std::string>& names) {
    std::set<std::string> wnames;
    for (const auto& [name, w] : weights) {
        if (!(w >= 0.0)) throw ValidationError("weights." + name, "weights must be >= 0");
        wnames.insert(name);
    }
    if (wnames != names) throw ValidationError("weights", "weights do not match the component models");
}

}  // namespace

Weights ensemble_weights(const std::vector<NamedRmse>& models) {
    if (models.empty()) throw ValidationError("models", "ensemble needs at least one model");
    Weights w;
    std::size_t exact = 0;
    for (const auto& m : models) {
        if (!(m.rmse >= 0.0) || !std::isfinite(m.rmse)) {
            throw ValidationError("models." + m.name + ".test_rmse", "test RMSE must be finite and >= 0");
        }
        if (!w.emplace(m.name, 0.0).second) throw ValidationError("models", "duplicate model name '" + m.name + "'");
        if (m.rmse == 0.0) ++exact;
    }
    if (exact > 0) {
        for (const auto& m : models) w[m.name] = m.rmse == 0.0 ? 1.0 / static_cast<double>(exact) : 0.0;
        return w;
    }
    double total = 0.0;
    for (const auto& m : models) total += 1.0 / m.rmse;
    for (const auto& m : models) w[m.name] = (1.0 / m.rmse) / total;
    return w;
}

std::vector<double> ensemble_predict(const std::map<std::string, std::vector<double>>& predictions,
                                     const Weights& weights) {
    std::set<std::string> names;
    for (const auto& [name, p] : predictions) names.insert(name);
    check_weights_cover(weights, names);
    if (predictions.empty()) return {};
    const std::size_t n = predictions.begin()->second.size();
    for (const auto& [name, p] : predictions) {
        if (p.size() != n) throw ValidationError("predictions." + name, "component prediction lengths differ");
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = HUGE_VAL, hi = -HUGE_VAL, acc = 0.0;
        for (const auto& [name, p] : predictions) {
            acc += weights.at(name) * p[i];
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
        }
        out[i] = std::clamp(acc, lo, hi);
    }
    return out;
}

std::vector<double> ensemble_predict(const std::vector<TrainedModel>& models, const Weights& weights,
                                     const FeatureMatrix& rows) {
    std::map<std::string, std::vector<double>> preds;
    for (const auto& m : models) preds[m.name] = predict(m, rows);
    return ensemble_predict(preds, weights);
}

void validate(const BootstrapConfig& cfg) {
    if (cfg.replicates < 100) throw ValidationError("bootstrap.replicates", "need at least 100 replicates");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ValidationError("bootstrap.level", "level must lie in (0, 1)");
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ValidationError("sample", "quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Interval residual_bootstrap(const std::vector<double>& points, const std::vector<double>& residuals,
                            const BootstrapConfig& cfg) {
    validate(cfg);
    if (residuals.size() < 10) throw ValidationError("residuals", "need at least 10 residuals for the bootstrap");
    const std::size_t m = points.size();
    const auto b_count = static_cast<std::size_t>(cfg.replicates);
    std::vector<std::vector<double>> draws(m, std::vector<double>(b_count));
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, residuals.size() - 1);
    for (std::size_t b = 0; b < b_count; ++b) {
        for (std::size_t i = 0; i < m; ++i) draws[i][b] = points[i] + residuals[pick(rng)];
    }
    const double alpha = (1.0 - cfg.level) / 2.0;
    Interval out{std::vector<double>(m), std::vector<double>(m)};
    for (std::size_t i = 0; i < m; ++i) {
        std::sort(draws[i].begin(), draws[i].end());
        out.lower[i] = std::max(0.0, std::min(points[i], quantile_sorted(draws[i], alpha)));
        out.upper[i] = std::max(points[i], quantile_sorted(draws[i], 1.0 - alpha));
    }
    return out;
}

Interval bootstrap_intervals(const TrainedModel& model, const FeatureMatrix& matrix, const FeatureMatrix& rows,
                             const BootstrapConfig& cfg) {
    validate(cfg);
    const auto fitted = predict(model, matrix);
    std::vector<double> residuals(fitted.size());
    for (std::size_t i = 0; i < fitted.size(); ++i) residuals[i] = matrix.y(static_cast<Eigen::Index>(i)) - fitted[i];
    return residual_bootstrap(predict(model, rows), residuals, cfg);
}

Interval ensemble_intervals(const std::map<std::string, Interval>& intervals, const Weights& weights) {
    std::set<std::string> names;
    for (const auto& [name, iv] : intervals) names.insert(name);
    check_weights_cover(weights, names);
    if (intervals.empty()) return {};
    const std::size_t n = intervals.begin()->second.lower.size();
    for (const auto& [name, iv] : intervals) {
        if (iv.lower.size() != n || iv.upper.size() != n) {
            throw ValidationError("intervals." + name, "component intervals are not aligned");
        }
    }
    Interval out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (const auto& [name, iv] : intervals) {
        const double w = weights.at(name);
        for (std::size_t i = 0; i < n; ++i) {
            out.lower[i] += w * iv.lower[i];
            out.upper[i] += w * iv.upper[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) out.upper[i] = std::max(out.upper[i], out.lower[i]);
    return out;
}

}  // namespace crossflow::forecast
