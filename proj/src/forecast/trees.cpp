#include "crossflow/forecast/trees.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/common/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crossflow::forecast {

namespace {

RegressionTree::Options tree_options(const Hyperparameters& hp, int default_depth, double default_features) {
    RegressionTree::Options opt;
    const double depth = hp_or(hp, "max_depth", default_depth);
    if (!(depth >= 1.0) || depth != std::floor(depth)) {
        throw ValidationError("max_depth", "max_depth must be an integer >= 1");
    }
    opt.max_depth = static_cast<int>(depth);
    const double leaf = hp_or(hp, "min_samples_leaf", 1);
    if (!(leaf >= 1.0)) throw ValidationError("min_samples_leaf", "min_samples_leaf must be >= 1");
    opt.min_samples_leaf = static_cast<int>(leaf);
    opt.max_features = hp_or(hp, "max_features", default_features);
    if (!(opt.max_features > 0.0 && opt.max_features <= 1.0)) {
        throw ValidationError("max_features", "max_features must lie in (0, 1]");
    }
    return opt;
}

void check_fit_input(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() == 0) throw ValidationError("matrix", "cannot fit on zero rows");
    if (X.rows() != y.size()) throw ValidationError("matrix", "X and y row counts differ");
}

std::vector<Eigen::Index> all_rows(Eigen::Index n) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    return rows;
}

nlohmann::json trees_to_json(const std::vector<RegressionTree>& trees) {
    auto arr = nlohmann::json::array();
    for (const auto& t : trees) arr.push_back(t.to_json());
    return arr;
}

std::vector<RegressionTree> trees_from_json(const nlohmann::json& arr) {
    std::vector<RegressionTree> out;
    for (const auto& t : arr) out.push_back(RegressionTree::from_json(t));
    return out;
}

}  // namespace

void RegressionTree::grow(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::vector<Eigen::Index>& rows,
                          const Options& opt, std::mt19937_64& rng) {
    if (rows.empty()) throw ValidationError("matrix", "cannot grow a tree on zero rows");
    nodes_.clear();
    auto work = rows;
    build(X, y, work, 0, opt, rng);
}

int RegressionTree::build(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<Eigen::Index>& rows,
                          int depth, const Options& opt, std::mt19937_64& rng) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    double sum = 0.0, sum_sq = 0.0;
    for (auto r : rows) {
        sum += y(r);
        sum_sq += y(r) * y(r);
    }
    const auto n = static_cast<double>(rows.size());
    nodes_[static_cast<std::size_t>(id)].value = sum / n;
    const double sse = std::max(0.0, sum_sq - sum * sum / n);

    const auto min_leaf = static_cast<std::size_t>(opt.min_samples_leaf);
    if (depth >= opt.max_depth || rows.size() < 2 * min_leaf || sse <= 0.0) return id;

    std::vector<Eigen::Index> features(static_cast<std::size_t>(X.cols()));
    std::iota(features.begin(), features.end(), Eigen::Index{0});
    if (opt.max_features < 1.0) {
        const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(opt.max_features * X.cols())));
        std::shuffle(features.begin(), features.end(), rng);
        features.resize(std::min(k, features.size()));
        std::sort(features.begin(), features.end());
    }

    double best_gain = 1e-12 * std::max(1.0, sse);
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<Eigen::Index> order = rows;
    for (auto f : features) {
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return X(a, f) < X(b, f) || (X(a, f) == X(b, f) && a < b);
        });
        double left_sum = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            left_sum += y(order[i]);
            const std::size_t n_left = i + 1;
            const std::size_t n_right = order.size() - n_left;
            if (n_left < min_leaf) continue;
            if (n_right < min_leaf) break;
            const double lo = X(order[i], f);
            const double hi = X(order[i + 1], f);
            if (!(lo < hi)) continue;
            const double right_sum = sum - left_sum;
            const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                                right_sum * right_sum / static_cast<double>(n_right) - sum * sum / n;
            if (gain > best_gain) {
                best_gain = gain;
                best_feature = static_cast<int>(f);
                best_threshold = lo + (hi - lo) / 2.0;
            }
        }
    }
    if (best_feature < 0) return id;

    std::vector<Eigen::Index> left, right;
    for (auto r : rows) (X(r, best_feature) <= best_threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int l = build(X, y, left, depth + 1, opt, rng);
    const int r = build(X, y, right, depth + 1, opt, rng);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
}

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
        const auto& n = nodes_[i];
        i = static_cast<std::size_t>(x(n.feature) <= n.threshold ? n.left : n.right);
    }
    return nodes_[i].value;
}

nlohmann::json RegressionTree::to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& n : nodes_) arr.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    return arr;
}

RegressionTree RegressionTree::from_json(const nlohmann::json& doc) {
    RegressionTree t;
    for (const auto& n : doc) {
        t.nodes_.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(), n.at(3).get<int>(),
                            n.at(4).get<double>()});
    }
    if (t.nodes_.empty()) throw ValidationError("tree", "tree has no nodes");
    return t;
}

void DecisionTreeRegressor::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
                                std::uint64_t seed) {
    check_fit_input(X, y);
    std::mt19937_64 rng(seed);
    tree_.grow(X, y, all_rows(X.rows()), tree_options(hp, 3, 1.0), rng);
}

Eigen::VectorXd DecisionTreeRegressor::predict_raw(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = tree_.predict(X.row(i));
    return out;
}

void RandomForestRegressor::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
                                std::uint64_t seed) {
    check_fit_input(X, y);
    const auto opt = tree_options(hp, 8, 0.5);
    const int n_trees = static_cast<int>(hp_or(hp, "n_estimators", 100));
    if (n_trees < 1) throw ValidationError("n_estimators", "n_estimators must be >= 1");
    trees_.assign(static_cast<std::size_t>(n_trees), {});
    for (int t = 0; t < n_trees; ++t) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::uniform_int_distribution<Eigen::Index> pick(0, X.rows() - 1);
        std::vector<Eigen::Index> sample(static_cast<std::size_t>(X.rows()));
        for (auto& r : sample) r = pick(rng);
        trees_[static_cast<std::size_t>(t)].grow(X, y, sample, opt, rng);
    }
}

Eigen::VectorXd RandomForestRegressor::predict_raw(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (const auto& t : trees_) out(i) += t.predict(X.row(i));
        out(i) /= static_cast<double>(trees_.size());
    }
    return out;
}

nlohmann::json RandomForestRegressor::parameters() const { return {{"trees", trees_to_json(trees_)}}; }

void RandomForestRegressor::load_parameters(const nlohmann::json& doc) { trees_ = trees_from_json(doc.at("trees")); }

void GradientBoostingRegressor::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
                                    std::uint64_t seed) {
    check_fit_input(X, y);
    const auto opt = tree_options(hp, 3, 1.0);
    const int rounds = static_cast<int>(hp_or(hp, "n_estimators", 100));
    learning_rate_ = hp_or(hp, "learning_rate", 0.1);
    const double subsample = hp_or(hp, "subsample", 0.8);
    if (rounds < 1) throw ValidationError("n_estimators", "n_estimators must be >= 1");
    if (!(learning_rate_ > 0.0)) throw ValidationError("learning_rate", "learning_rate must be > 0");
    if (!(subsample > 0.0 && subsample <= 1.0)) throw ValidationError("subsample", "subsample must lie in (0, 1]");

    init_ = y.mean();
    Eigen::VectorXd current = Eigen::VectorXd::Constant(y.size(), init_);
    trees_.assign(static_cast<std::size_t>(rounds), {});
    auto rows = all_rows(X.rows());
    const auto n_sample = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(subsample * X.rows())));
    for (int m = 0; m < rounds; ++m) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
        std::vector<Eigen::Index> sample = rows;
        if (n_sample < rows.size()) {
            std::shuffle(sample.begin(), sample.end(), rng);
            sample.resize(n_sample);
            std::sort(sample.begin(), sample.end());
        }
        const Eigen::VectorXd residual = y - current;
        auto& tree = trees_[static_cast<std::size_t>(m)];
        tree.grow(X, residual, sample, opt, rng);
        for (Eigen::Index i = 0; i < X.rows(); ++i) current(i) += learning_rate_ * tree.predict(X.row(i));
    }
}

Eigen::VectorXd GradientBoostingRegressor::predict_raw(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), init_);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (const auto& t : trees_) out(i) += learning_rate_ * t.predict(X.row(i));
    }
    return out;
}

nlohmann::json GradientBoostingRegressor::parameters() const {
    return {{"init", init_}, {"learning_rate", learning_rate_}, {"trees", trees_to_json(trees_)}};
}

void GradientBoostingRegressor::load_parameters(const nlohmann::json& doc) {
    init_ = doc.at("init").get<double>();
    learning_rate_ = doc.at("learning_rate").get<double>();
    trees_ = trees_from_json(doc.at("trees"));
}

}  // namespace crossflow::forecast
