#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace crossflow::forecast {

using Hyperparameters = std::map<std::string, double>;

// A regression family. Implementations are fit once; predictions are raw
// (unclipped). New families plug in through register_regressor.
class Regressor {
public:
    virtual ~Regressor() = default;

    virtual std::string kind() const = 0;
    virtual void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
                     std::uint64_t seed) = 0;
    virtual Eigen::VectorXd predict_raw(const Eigen::MatrixXd& X) const = 0;

    // Fitted parameters only; hyperparameters travel with TrainedModel.
    virtual nlohmann::json parameters() const = 0;
    virtual void load_parameters(const nlohmann::json& doc) = 0;
};

using RegressorFactory = std::function<std::unique_ptr<Regressor>()>;

// Built in: ridge, lasso, decision_tree, random_forest, gradient_boosting,
// historical_mean.
std::unique_ptr<Regressor> make_regressor(const std::string& kind);
void register_regressor(const std::string& kind, RegressorFactory factory);
std::vector<std::string> registered_kinds();

// Reads a hyperparameter or returns `fallback`.
double hp_or(const Hyperparameters& hp, const std::string& key, double fallback);

}  // namespace crossflow::forecast
