#pragma once

#include "crossflow/forecast/regressor.hpp"

namespace crossflow::forecast {

// Shared state for penalized linear models fit on standardized columns.
// Columns with zero variance in the training data get a zero coefficient.
class LinearModel : public Regressor {
public:
    Eigen::VectorXd predict_raw(const Eigen::MatrixXd& X) const override;
    nlohmann::json parameters() const override;
    void load_parameters(const nlohmann::json& doc) override;

    double intercept() const { return intercept_; }
    // Coefficients on the original feature scale.
    const Eigen::VectorXd& coefficients() const { return coef_; }
    // Coefficients on the standardized scale the penalty acts on.
    const Eigen::VectorXd& standardized_coefficients() const { return std_coef_; }

protected:
    struct Standardized {
        Eigen::MatrixXd Z;
        Eigen::VectorXd centered_y;
        Eigen::VectorXd mean, scale;
        std::vector<Eigen::Index> active;  // columns with non-zero variance
        double y_mean = 0.0;
    };
    static Standardized standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
    void set_solution(const Standardized& s, const Eigen::VectorXd& beta_active);

    double intercept_ = 0.0;
    Eigen::VectorXd coef_;
    Eigen::VectorXd std_coef_;
};

// Minimizes ||y - b0 - Zb||^2 + alpha ||b||^2. alpha = 0 is ordinary least
// squares (minimum-norm when rank deficient).
class RidgeRegressor final : public LinearModel {
public:
    std::string kind() const override { return "ridge"; }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
             std::uint64_t seed) override;
};

// Minimizes (1/2n)||y - b0 - Zb||^2 + alpha ||b||_1 by cyclic coordinate
// descent.
class LassoRegressor final : public LinearModel {
public:
    std::string kind() const override { return "lasso"; }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
             std::uint64_t seed) override;
    int iterations() const { return iterations_; }

private:
    int iterations_ = 0;
};

// Predicts the training mean regardless of input.
class HistoricalMean final : public Regressor {
public:
    std::string kind() const override { return "historical_mean"; }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
             std::uint64_t seed) override;
    Eigen::VectorXd predict_raw(const Eigen::MatrixXd& X) const override;
    nlohmann::json parameters() const override { return {{"mean", mean_}}; }
    void load_parameters(const nlohmann::json& doc) override { mean_ = doc.at("mean").get<double>(); }
    double mean() const { return mean_; }

private:
    double mean_ = 0.0;
};

}  // namespace crossflow::forecast
