#pragma once

#include "crossflow/forecast/regressor.hpp"

#include <random>
#include <vector>

namespace crossflow::forecast {

// CART regression tree grown by exhaustive squared-error split search.
// Samples go left when x[feature] <= threshold.
class RegressionTree {
public:
    struct Node {
        int feature = -1;  // -1 for a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    struct Options {
        int max_depth = 3;
        int min_samples_leaf = 1;
        double max_features = 1.0;  // fraction of columns tried per split
    };

    void grow(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::vector<Eigen::Index>& rows,
              const Options& opt, std::mt19937_64& rng);
    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    nlohmann::json to_json() const;
    static RegressionTree from_json(const nlohmann::json& doc);

private:
    int build(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<Eigen::Index>& rows, int depth,
              const Options& opt, std::mt19937_64& rng);

    std::vector<Node> nodes_;
};

class DecisionTreeRegressor final : public Regressor {
public:
    std::string kind() const override { return "decision_tree"; }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
             std::uint64_t seed) override;
    Eigen::VectorXd predict_raw(const Eigen::MatrixXd& X) const override;
    nlohmann::json parameters() const override { return tree_.to_json(); }
    void load_parameters(const nlohmann::json& doc) override { tree_ = RegressionTree::from_json(doc); }
    const RegressionTree& tree() const { return tree_; }

private:
    RegressionTree tree_;
};

// Bagged trees with per-split feature subsampling.
class RandomForestRegressor final : public Regressor {
public:
    std::string kind() const override { return "random_forest"; }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
             std::uint64_t seed) override;
    Eigen::VectorXd predict_raw(const Eigen::MatrixXd& X) const override;
    nlohmann::json parameters() const override;
    void load_parameters(const nlohmann::json& doc) override;

private:
    std::vector<RegressionTree> trees_;
};

// Least-squares gradient boosting on shallow trees with row subsampling.
class GradientBoostingRegressor final : public Regressor {
public:
    std::string kind() const override { return "gradient_boosting"; }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
             std::uint64_t seed) override;
    Eigen::VectorXd predict_raw(const Eigen::MatrixXd& X) const override;
    nlohmann::json parameters() const override;
    void load_parameters(const nlohmann::json& doc) override;

private:
    double init_ = 0.0;
    double learning_rate_ = 0.1;
    std::vector<RegressionTree> trees_;
};

}  // namespace crossflow::forecast
