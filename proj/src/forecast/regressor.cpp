#include "crossflow/forecast/regressor.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/forecast/linear.hpp"
#include "crossflow/forecast/trees.hpp"

#include <mutex>

namespace crossflow::forecast {

namespace {

struct Registry {
    std::mutex mutex;
    std::map<std::string, RegressorFactory> factories{
        {"ridge", [] { return std::make_unique<RidgeRegressor>(); }},
        {"lasso", [] { return std::make_unique<LassoRegressor>(); }},
        {"decision_tree", [] { return std::make_unique<DecisionTreeRegressor>(); }},
        {"random_forest", [] { return std::make_unique<RandomForestRegressor>(); }},
        {"gradient_boosting", [] { return std::make_unique<GradientBoostingRegressor>(); }},
        {"historical_mean", [] { return std::make_unique<HistoricalMean>(); }},
    };
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

std::unique_ptr<Regressor> make_regressor(const std::string& kind) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.factories.find(kind);
    if (it == r.factories.end()) throw ValidationError("kind", "unknown model kind '" + kind + "'");
    return it->second();
}

void register_regressor(const std::string& kind, RegressorFactory factory) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    r.factories[kind] = std::move(factory);
}

std::vector<std::string> registered_kinds() {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    std::vector<std::string> out;
    for (const auto& [k, f] : r.factories) out.push_back(k);
    return out;
}

double hp_or(const Hyperparameters& hp, const std::string& key, double fallback) {
    auto it = hp.find(key);
    return it == hp.end() ? fallback : it->second;
}

}  // namespace crossflow::forecast
