#pragma once

#include <vector>

#include "gridcast/tree.hpp"

namespace gridcast {

// Bagged exhaustive-split trees with feature bagging; prediction is the
// mean of tree outputs.
class RandomForestRegressor final : public Regressor {
public:
    RandomForestRegressor(int n_estimators = 16, int features_per_split = 0,
                          TreeParams base = {}, std::uint64_t seed = 0)
        : n_estimators_(n_estimators),
          features_per_split_(features_per_split),  // 0 = max(1, d/3)
          base_(base),
          seed_(seed) {}

    void fit(const MatrixXd& X, const VectorXd& y) override;
    double predict_one(const VectorXd& x) const override;
    const std::vector<DecisionTreeRegressor>& trees() const { return trees_; }

    std::string kind() const override { return "random_forest"; }
    nlohmann::json params_json() const override;
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    int n_estimators_, features_per_split_;
    TreeParams base_;
    std::uint64_t seed_;
    std::vector<DecisionTreeRegressor> trees_;
};

// Each tree trained on the full sample with randomized cut-points.
class ExtraTreesRegressor final : public Regressor {
public:
    ExtraTreesRegressor(int n_estimators = 16, int features_per_split = -1,
                        TreeParams base = {}, std::uint64_t seed = 0)
        : n_estimators_(n_estimators), features_per_split_(features_per_split),
          base_(base), seed_(seed) {}

    void fit(const MatrixXd& X, const VectorXd& y) override;
    double predict_one(const VectorXd& x) const override;
    const std::vector<DecisionTreeRegressor>& trees() const { return trees_; }

    std::string kind() const override { return "extra_trees"; }
    nlohmann::json params_json() const override;
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    int n_estimators_, features_per_split_;
    TreeParams base_;
    std::uint64_t seed_;
    std::vector<DecisionTreeRegressor> trees_;
};

// AdaBoost.R2 with linear per-stage loss: reweighted resampling, stage
// weight log(1/beta), prediction by weighted median of stage outputs.
class AdaBoostRegressor final : public Regressor {
public:
    AdaBoostRegressor(int n_estimators = 16, TreeParams base = {}, std::uint64_t seed = 0)
        : n_estimators_(n_estimators), base_(base), seed_(seed) {}

    void fit(const MatrixXd& X, const VectorXd& y) override;
    double predict_one(const VectorXd& x) const override;

    std::size_t n_stages() const { return stages_.size(); }
    bool degenerate() const { return degenerate_; }

    std::string kind() const override { return "adaboost"; }
    nlohmann::json params_json() const override;
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    int n_estimators_;
    TreeParams base_;
    std::uint64_t seed_;
    std::vector<DecisionTreeRegressor> stages_;
    std::vector<double> stage_weights_;
    bool degenerate_ = false;
};

// Squared-loss boosting: F0 = mean(y), each stage fits the residuals.
class GradientBoostingRegressor final : public Regressor {
public:
    GradientBoostingRegressor(int n_estimators = 16, double learning_rate = 1.0,
                              TreeParams base = {}, std::uint64_t seed = 0)
        : n_estimators_(n_estimators), learning_rate_(learning_rate), base_(base),
          seed_(seed) {}

    void fit(const MatrixXd& X, const VectorXd& y) override;
    double predict_one(const VectorXd& x) const override;
    const std::vector<double>& stage_train_mse() const { return stage_train_mse_; }

    std::string kind() const override { return "gradient_boosting"; }
    nlohmann::json params_json() const override;
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    int n_estimators_;
    double learning_rate_;
    TreeParams base_;
    std::uint64_t seed_;
    double f0_ = 0.0;
    std::vector<DecisionTreeRegressor> trees_;
    std::vector<double> stage_train_mse_;
};

}  // namespace gridcast
