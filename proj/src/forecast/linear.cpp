#include "crossflow/forecast/linear.hpp"

#include "crossflow/common/error.hpp"

#include <cmath>

namespace crossflow::forecast {

LinearModel::Standardized LinearModel::standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() == 0) throw ValidationError("matrix", "cannot fit on zero rows");
    if (X.rows() != y.size()) throw ValidationError("matrix", "X and y row counts differ");
    Standardized s;
    const auto n = static_cast<double>(X.rows());
    s.y_mean = y.mean();
    s.centered_y = y.array() - s.y_mean;
    s.mean = X.colwise().mean().transpose();
    s.scale = Eigen::VectorXd::Ones(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double var = (X.col(j).array() - s.mean(j)).square().sum() / n;
        const double sd = std::sqrt(var);
        // Relative threshold: a column that is constant up to rounding.
        if (sd > 1e-12 * std::max(1.0, std::abs(s.mean(j)))) {
            s.scale(j) = sd;
            s.active.push_back(j);
        }
    }
    s.Z.resize(X.rows(), static_cast<Eigen::Index>(s.active.size()));
    for (std::size_t k = 0; k < s.active.size(); ++k) {
        const auto j = s.active[k];
        s.Z.col(static_cast<Eigen::Index>(k)) = (X.col(j).array() - s.mean(j)) / s.scale(j);
    }
    return s;
}

void LinearModel::set_solution(const Standardized& s, const Eigen::VectorXd& beta_active) {
    const auto p = s.mean.size();
    std_coef_ = Eigen::VectorXd::Zero(p);
    coef_ = Eigen::VectorXd::Zero(p);
    intercept_ = s.y_mean;
    for (std::size_t k = 0; k < s.active.size(); ++k) {
        const auto j = s.active[k];
        std_coef_(j) = beta_active(static_cast<Eigen::Index>(k));
        coef_(j) = std_coef_(j) / s.scale(j);
        intercept_ -= coef_(j) * s.mean(j);
    }
}

Eigen::VectorXd LinearModel::predict_raw(const Eigen::MatrixXd& X) const {
    return (X * coef_).array() + intercept_;
}

nlohmann::json LinearModel::parameters() const {
    return {{"intercept", intercept_},
            {"coefficients", std::vector<double>(coef_.data(), coef_.data() + coef_.size())},
            {"standardized_coefficients", std::vector<double>(std_coef_.data(), std_coef_.data() + std_coef_.size())}};
}

void LinearModel::load_parameters(const nlohmann::json& doc) {
    intercept_ = doc.at("intercept").get<double>();
    const auto c = doc.at("coefficients").get<std::vector<double>>();
    const auto sc = doc.at("standardized_coefficients").get<std::vector<double>>();
    coef_ = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    std_coef_ = Eigen::Map<const Eigen::VectorXd>(sc.data(), static_cast<Eigen::Index>(sc.size()));
}

void RidgeRegressor::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
                         std::uint64_t) {
    const double alpha = hp_or(hp, "alpha", 1.0);
    if (!(alpha >= 0.0)) throw ValidationError("alpha", "ridge penalty must be >= 0");
    const auto s = standardize(X, y);
    Eigen::VectorXd beta;
    if (s.Z.cols() == 0) {
        beta.resize(0);
    } else if (alpha == 0.0) {
        beta = s.Z.completeOrthogonalDecomposition().solve(s.centered_y);
    } else {
        Eigen::MatrixXd gram = s.Z.transpose() * s.Z;
        gram.diagonal().array() += alpha;
        beta = gram.ldlt().solve(s.Z.transpose() * s.centered_y);
    }
    set_solution(s, beta);
}

void LassoRegressor::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
                         std::uint64_t) {
    const double alpha = hp_or(hp, "alpha", 1.0);
    if (!(alpha >= 0.0)) throw ValidationError("alpha", "lasso penalty must be >= 0");
    const double tol = hp_or(hp, "tol", 1e-12);
    const int max_sweeps = static_cast<int>(hp_or(hp, "max_iter", 100000));

    const auto s = standardize(X, y);
    const auto n = static_cast<double>(s.Z.rows());
    const auto p = s.Z.cols();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd residual = s.centered_y;
    iterations_ = 0;
    for (int sweep = 0; sweep < max_sweeps && p > 0; ++sweep) {
        ++iterations_;
        double max_step = 0.0, max_beta = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            // Columns are standardized, so (1/n) z_j'z_j = 1.
            const double rho = s.Z.col(j).dot(residual) / n + beta(j);
            const double updated = std::copysign(std::max(std::abs(rho) - alpha, 0.0), rho);
            const double delta = updated - beta(j);
            if (delta != 0.0) {
                residual -= delta * s.Z.col(j);
                beta(j) = updated;
            }
            max_step = std::max(max_step, std::abs(delta));
            max_beta = std::max(max_beta, std::abs(updated));
        }
        if (max_step <= tol * std::max(1.0, max_beta)) break;
    }
    set_solution(s, beta);
}

void HistoricalMean::fit(const Eigen::MatrixXd&, const Eigen::VectorXd& y, const Hyperparameters&, std::uint64_t) {
    if (y.size() == 0) throw ValidationError("y", "historical mean needs at least one training value");
    mean_ = y.mean();
}

Eigen::VectorXd HistoricalMean::predict_raw(const Eigen::MatrixXd& X) const {
    return Eigen::VectorXd::Constant(X.rows(), mean_);
}

}  // namespace crossflow::forecast
