#pragma once

#include <memory>

#include "gridcast/features.hpp"
#include "gridcast/mlp.hpp"
#include "gridcast/regressor.hpp"

namespace gridcast {

// Incremental regressor: predict-then-learn, one observation at a time.
// predict_one never mutates; learn_one is the only mutation path and
// increments updates_seen.
class OnlineRegressor {
public:
    virtual ~OnlineRegressor() = default;

    virtual double predict_one(const VectorXd& x) const = 0;
    virtual void learn_one(const VectorXd& x, double y) = 0;

    std::uint64_t updates_seen() const { return updates_seen_; }
    int n_features() const { return n_features_; }

    virtual std::string kind() const = 0;
    virtual nlohmann::json params_json() const = 0;
    virtual nlohmann::json state_json() const = 0;
    virtual void load_state(const nlohmann::json& state) = 0;

protected:
    void check_dim(Eigen::Index cols) const;
    std::uint64_t updates_seen_ = 0;
    int n_features_ = 0;
};

// Constant-step SGD on squared loss: w <- w - eta*(w.x + b - y)*x.
class OnlineLinear final : public OnlineRegressor {
public:
    explicit OnlineLinear(int n_features, double eta = 0.01);

    double predict_one(const VectorXd& x) const override;
    void learn_one(const VectorXd& x, double y) override;

    const VectorXd& weights() const { return w_; }
    double intercept() const { return b_; }

    std::string kind() const override { return "online_linear"; }
    nlohmann::json params_json() const override { return {{"eta", eta_}}; }
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    double eta_;
    VectorXd w_;
    double b_ = 0.0;
};

// Epsilon-insensitive PA-I regression update. When fit_intercept is on the
// intercept rides along as a constant-1 feature inside the update norm.
// max_iterations / shuffle / tolerance mirror a reference batch interface
// but are documented no-ops for a true single-pass learner.
class PassiveAggressive final : public OnlineRegressor {
public:
    PassiveAggressive(int n_features, double C = 1.0, double epsilon = 0.0,
                      bool fit_intercept = true, int max_iterations = 1,
                      bool shuffle = false, double tolerance = 0.001);

    double predict_one(const VectorXd& x) const override;
    void learn_one(const VectorXd& x, double y) override;

    const VectorXd& weights() const { return w_; }
    double intercept() const { return b_; }
    std::uint64_t skipped_updates() const { return skipped_; }

    std::string kind() const override { return "passive_aggressive"; }
    nlohmann::json params_json() const override;
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    double C_, epsilon_;
    bool fit_intercept_;
    int max_iterations_;
    bool shuffle_;
    double tolerance_;
    VectorXd w_;
    double b_ = 0.0;
    std::uint64_t skipped_ = 0;
};

// T_lambda(y) = (y^lambda - 1)/lambda, ln(y) at lambda = 0. y must be > 0.
double boxcox_transform(double y, double lambda);
double boxcox_inverse(double z, double lambda);

// Online linear model trained on Box-Cox transformed targets; predictions
// come back in original units. Inner predictions outside the transform's
// domain are clamped to the boundary and counted.
class BoxCoxOnline final : public OnlineRegressor {
public:
    BoxCoxOnline(int n_features, double lambda, double eta = 0.01);

    double predict_one(const VectorXd& x) const override;
    void learn_one(const VectorXd& x, double y) override;

    std::uint64_t clamped_predictions() const { return clamped_; }

    std::string kind() const override { return "boxcox_linear"; }
    nlohmann::json params_json() const override {
        return {{"lambda", lambda_}, {"eta", inner_.params_json().at("eta")}};
    }
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    double lambda_;
    OnlineLinear inner_;
    mutable std::uint64_t clamped_ = 0;
};

// One backpropagation step per observation, same gradient code as the
// batch network.
class OnlineMlp final : public OnlineRegressor {
public:
    OnlineMlp(int n_features, MlpParams params);

    double predict_one(const VectorXd& x) const override;
    void learn_one(const VectorXd& x, double y) override;

    std::string kind() const override { return "online_mlp"; }
    nlohmann::json params_json() const override { return net_.params_json(); }
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    double learning_rate_;
    MlpRegressor net_;
};

// Adapter: trains the inner learner on min-max scaled targets while the
// outside world speaks raw units.
class ScaledTargetOnline final : public OnlineRegressor {
public:
    ScaledTargetOnline(std::unique_ptr<OnlineRegressor> inner, MinMaxScaler target_scaler);

    double predict_one(const VectorXd& x) const override;
    void learn_one(const VectorXd& x, double y) override;

    const OnlineRegressor& inner() const { return *inner_; }

    std::string kind() const override { return "scaled_target"; }
    nlohmann::json params_json() const override;
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    std::unique_ptr<OnlineRegressor> inner_;
    MinMaxScaler scaler_;
};

std::unique_ptr<OnlineRegressor> make_online_regressor(const std::string& kind,
                                                       int n_features,
                                                       const nlohmann::json& params);

nlohmann::json online_document(const OnlineRegressor& model);
std::unique_ptr<OnlineRegressor> online_from_document(const nlohmann::json& doc);

struct ProgressiveResult {
    std::vector<double> predictions;   // NaN where the step errored
    std::vector<double> residuals;     // actual - predicted, original units
    std::vector<std::string> step_errors;  // empty string = clean step
    std::size_t missing = 0;
    double mae = 0.0;
    double rmse = 0.0;
};

// One learning pass over `pretrain` in row order, then for every stream
// row: predict first, record the residual, learn afterwards.
ProgressiveResult progressive_validation(OnlineRegressor& model,
                                         const FeatureMatrix& pretrain,
                                         const FeatureMatrix& stream);

}  // namespace gridcast
