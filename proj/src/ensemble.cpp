#include "gridcast/ensemble.hpp"

#include <algorithm>

namespace gridcast {

namespace {

nlohmann::json trees_state(const std::vector<DecisionTreeRegressor>& trees) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : trees) arr.push_back(t.state_json());
    return arr;
}

std::vector<DecisionTreeRegressor> trees_from_state(const nlohmann::json& arr,
                                                    const TreeParams& base) {
    std::vector<DecisionTreeRegressor> trees;
    for (const auto& s : arr) {
        DecisionTreeRegressor t(base);
        t.load_state(s);
        trees.push_back(std::move(t));
    }
    return trees;
}

double mean_of_trees(const std::vector<DecisionTreeRegressor>& trees, const VectorXd& x) {
    double sum = 0.0;
    for (const auto& t : trees) sum += t.predict_one(x);
    return sum / static_cast<double>(trees.size());
}

}  // namespace

void RandomForestRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (n_estimators_ < 1) fail("InvalidArgument", "n_estimators >= 1");
    Rng rng(seed_);
    const auto n = static_cast<std::size_t>(X.rows());
    TreeParams tp = base_;
    tp.split_mode = SplitMode::exhaustive;
    tp.features_per_split = features_per_split_ > 0
                                ? features_per_split_
                                : std::max(1, static_cast<int>(X.cols()) / 3);
    trees_.clear();
    for (int m = 0; m < n_estimators_; ++m) {
        MatrixXd Xb(X.rows(), X.cols());
        VectorXd yb(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const auto j = static_cast<Eigen::Index>(rng.uniform_index(n));
            Xb.row(i) = X.row(j);
            yb[i] = y[j];
        }
        DecisionTreeRegressor tree(tp);
        tree.fit_with_rng(Xb, yb, rng);
        trees_.push_back(std::move(tree));
    }
    n_features_ = static_cast<int>(X.cols());
}

double RandomForestRegressor::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    return mean_of_trees(trees_, x);
}

nlohmann::json RandomForestRegressor::params_json() const {
    return {{"n_estimators", n_estimators_}, {"features_per_split", features_per_split_},
            {"base", tree_params_json(base_)}, {"seed", seed_}};
}

nlohmann::json RandomForestRegressor::state_json() const {
    return {{"trees", trees_state(trees_)}, {"n_features", n_features_}};
}

void RandomForestRegressor::load_state(const nlohmann::json& state) {
    trees_ = trees_from_state(state.at("trees"), base_);
    n_features_ = state.at("n_features").get<int>();
}

void ExtraTreesRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (n_estimators_ < 1) fail("InvalidArgument", "n_estimators >= 1");
    Rng rng(seed_);
    TreeParams tp = base_;
    tp.split_mode = SplitMode::random;
    tp.features_per_split = features_per_split_;
    trees_.clear();
    for (int m = 0; m < n_estimators_; ++m) {
        DecisionTreeRegressor tree(tp);
        tree.fit_with_rng(X, y, rng);
        trees_.push_back(std::move(tree));
    }
    n_features_ = static_cast<int>(X.cols());
}

double ExtraTreesRegressor::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    return mean_of_trees(trees_, x);
}

nlohmann::json ExtraTreesRegressor::params_json() const {
    return {{"n_estimators", n_estimators_}, {"features_per_split", features_per_split_},
            {"base", tree_params_json(base_)}, {"seed", seed_}};
}

nlohmann::json ExtraTreesRegressor::state_json() const {
    return {{"trees", trees_state(trees_)}, {"n_features", n_features_}};
}

void ExtraTreesRegressor::load_state(const nlohmann::json& state) {
    trees_ = trees_from_state(state.at("trees"), base_);
    n_features_ = state.at("n_features").get<int>();
}

void AdaBoostRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (n_estimators_ < 1) fail("InvalidArgument", "n_estimators >= 1");
    Rng rng(seed_);
    const auto n = static_cast<std::size_t>(X.rows());
    stages_.clear();
    stage_weights_.clear();
    degenerate_ = false;

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<double> cum(n);
    for (int m = 0; m < n_estimators_; ++m) {
        // resample proportional to weights
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += w[i];
            cum[i] = acc;
        }
        MatrixXd Xb(X.rows(), X.cols());
        VectorXd yb(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const double u = rng.uniform() * acc;
            const auto it = std::lower_bound(cum.begin(), cum.end(), u);
            const auto j = static_cast<Eigen::Index>(it - cum.begin());
            Xb.row(i) = X.row(std::min<Eigen::Index>(j, X.rows() - 1));
            yb[i] = y[std::min<Eigen::Index>(j, X.rows() - 1)];
        }
        DecisionTreeRegressor tree(base_);
        tree.fit_with_rng(Xb, yb, rng);

        VectorXd err(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            err[i] = std::abs(tree.predict_one(X.row(i)) - y[i]);
        const double emax = err.maxCoeff();
        if (emax == 0.0) {
            // perfect stage, dominate the vote and stop early
            stages_.push_back(std::move(tree));
            stage_weights_.push_back(std::log(1e10));
            break;
        }
        double lbar = 0.0;
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            lbar += w[static_cast<std::size_t>(i)] * (err[i] / emax);
        if (lbar >= 0.5) {
            if (stages_.empty()) {
                stages_.push_back(std::move(tree));
                stage_weights_.push_back(1.0);
                degenerate_ = true;
            }
            break;
        }
        const double beta = lbar / (1.0 - lbar);
        stages_.push_back(std::move(tree));
        stage_weights_.push_back(std::log(1.0 / beta));

        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] *= std::pow(beta, 1.0 - err[static_cast<Eigen::Index>(i)] / emax);
            wsum += w[i];
        }
        for (auto& wi : w) wi /= wsum;
    }
    n_features_ = static_cast<int>(X.cols());
}

double AdaBoostRegressor::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    std::vector<std::pair<double, double>> pw;  // (prediction, stage weight)
    pw.reserve(stages_.size());
    for (std::size_t m = 0; m < stages_.size(); ++m)
        pw.emplace_back(stages_[m].predict_one(x), stage_weights_[m]);
    std::sort(pw.begin(), pw.end());
    double total = 0.0;
    for (const auto& [p, wt] : pw) total += wt;
    double acc = 0.0;
    for (const auto& [p, wt] : pw) {
        acc += wt;
        if (acc >= 0.5 * total) return p;
    }
    return pw.back().first;
}

nlohmann::json AdaBoostRegressor::params_json() const {
    return {{"n_estimators", n_estimators_}, {"base", tree_params_json(base_)},
            {"seed", seed_}};
}

nlohmann::json AdaBoostRegressor::state_json() const {
    return {{"trees", trees_state(stages_)}, {"stage_weights", stage_weights_},
            {"degenerate", degenerate_}, {"n_features", n_features_}};
}

void AdaBoostRegressor::load_state(const nlohmann::json& state) {
    stages_ = trees_from_state(state.at("trees"), base_);
    stage_weights_ = state.at("stage_weights").get<std::vector<double>>();
    degenerate_ = state.at("degenerate").get<bool>();
    n_features_ = state.at("n_features").get<int>();
}

void GradientBoostingRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (n_estimators_ < 1) fail("InvalidArgument", "n_estimators >= 1");
    if (learning_rate_ <= 0.0) fail("InvalidArgument", "learning_rate > 0");
    Rng rng(seed_);
    f0_ = y.mean();
    VectorXd residual = y.array() - f0_;
    trees_.clear();
    stage_train_mse_.clear();
    for (int m = 0; m < n_estimators_; ++m) {
        DecisionTreeRegressor tree(base_);
        tree.fit_with_rng(X, residual, rng);
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            residual[i] -= learning_rate_ * tree.predict_one(X.row(i));
        trees_.push_back(std::move(tree));
        stage_train_mse_.push_back(residual.squaredNorm() /
                                   static_cast<double>(X.rows()));
    }
    n_features_ = static_cast<int>(X.cols());
}

double GradientBoostingRegressor::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    double f = f0_;
    for (const auto& t : trees_) f += learning_rate_ * t.predict_one(x);
    return f;
}

nlohmann::json GradientBoostingRegressor::params_json() const {
    return {{"n_estimators", n_estimators_}, {"learning_rate", learning_rate_},
            {"base", tree_params_json(base_)}, {"seed", seed_}};
}

nlohmann::json GradientBoostingRegressor::state_json() const {
    return {{"trees", trees_state(trees_)}, {"f0", f0_}, {"n_features", n_features_}};
}

void GradientBoostingRegressor::load_state(const nlohmann::json& state) {
    trees_ = trees_from_state(state.at("trees"), base_);
    f0_ = state.at("f0").get<double>();
    n_features_ = state.at("n_features").get<int>();
}

}  // namespace gridcast
