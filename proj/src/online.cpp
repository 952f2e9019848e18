#include "gridcast/online.hpp"

#include <cmath>
#include <limits>

namespace gridcast {

namespace {
constexpr int kOnlineFormatVersion = 1;
}

void OnlineRegressor::check_dim(Eigen::Index cols) const {
    if (cols != n_features_)
        fail("DimensionMismatch", kind() + " holds " + std::to_string(n_features_) +
                                      " features, got " + std::to_string(cols));
}

OnlineLinear::OnlineLinear(int n_features, double eta) : eta_(eta) {
    if (n_features < 1) fail("InvalidArgument", "n_features >= 1");
    if (eta <= 0.0) fail("InvalidArgument", "eta > 0");
    n_features_ = n_features;
    w_ = VectorXd::Zero(n_features);
}

double OnlineLinear::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    return w_.dot(x) + b_;
}

void OnlineLinear::learn_one(const VectorXd& x, double y) {
    check_dim(x.size());
    const double err = w_.dot(x) + b_ - y;
    w_ -= eta_ * err * x;
    b_ -= eta_ * err;
    if (!w_.allFinite() || !std::isfinite(b_))
        fail("NonFiniteUpdate", "weights diverged after " +
                                    std::to_string(updates_seen_ + 1) + " updates (err=" +
                                    std::to_string(err) + ")");
    ++updates_seen_;
}

nlohmann::json OnlineLinear::state_json() const {
    return {{"weights", to_std(w_)}, {"intercept", b_}, {"updates_seen", updates_seen_}};
}

void OnlineLinear::load_state(const nlohmann::json& state) {
    w_ = from_std(state.at("weights").get<std::vector<double>>());
    b_ = state.at("intercept").get<double>();
    updates_seen_ = state.at("updates_seen").get<std::uint64_t>();
    n_features_ = static_cast<int>(w_.size());
}

PassiveAggressive::PassiveAggressive(int n_features, double C, double epsilon,
                                     bool fit_intercept, int max_iterations, bool shuffle,
                                     double tolerance)
    : C_(C), epsilon_(epsilon), fit_intercept_(fit_intercept),
      max_iterations_(max_iterations), shuffle_(shuffle), tolerance_(tolerance) {
    if (n_features < 1) fail("InvalidArgument", "n_features >= 1");
    if (C <= 0.0) fail("InvalidArgument", "C > 0");
    if (epsilon < 0.0) fail("InvalidArgument", "epsilon >= 0");
    n_features_ = n_features;
    w_ = VectorXd::Zero(n_features);
}

double PassiveAggressive::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    return w_.dot(x) + b_;
}

void PassiveAggressive::learn_one(const VectorXd& x, double y) {
    check_dim(x.size());
    const double pred = w_.dot(x) + b_;
    const double loss = std::max(0.0, std::abs(pred - y) - epsilon_);
    if (loss > 0.0) {
        // the intercept behaves as a constant-1 feature inside the norm
        const double norm_sq = x.squaredNorm() + (fit_intercept_ ? 1.0 : 0.0);
        if (norm_sq == 0.0) {
            ++skipped_;
            ++updates_seen_;
            return;
        }
        const double tau = std::min(C_, loss / norm_sq);
        const double sign = y > pred ? 1.0 : -1.0;
        w_ += sign * tau * x;
        if (fit_intercept_) b_ += sign * tau;
    }
    ++updates_seen_;
}

nlohmann::json PassiveAggressive::params_json() const {
    return {{"C", C_}, {"epsilon", epsilon_}, {"fit_intercept", fit_intercept_},
            {"max_iterations", max_iterations_}, {"shuffle", shuffle_},
            {"tolerance", tolerance_}};
}

nlohmann::json PassiveAggressive::state_json() const {
    return {{"weights", to_std(w_)}, {"intercept", b_}, {"updates_seen", updates_seen_},
            {"skipped", skipped_}};
}

void PassiveAggressive::load_state(const nlohmann::json& state) {
    w_ = from_std(state.at("weights").get<std::vector<double>>());
    b_ = state.at("intercept").get<double>();
    updates_seen_ = state.at("updates_seen").get<std::uint64_t>();
    skipped_ = state.at("skipped").get<std::uint64_t>();
    n_features_ = static_cast<int>(w_.size());
}

double boxcox_transform(double y, double lambda) {
    if (!(y > 0.0)) fail("NonPositiveTarget", "box-cox requires y > 0, got " +
                                                  std::to_string(y));
    if (lambda == 0.0) return std::log(y);
    return (std::pow(y, lambda) - 1.0) / lambda;
}

double boxcox_inverse(double z, double lambda) {
    if (lambda == 0.0) return std::exp(z);
    return std::pow(1.0 + lambda * z, 1.0 / lambda);
}

BoxCoxOnline::BoxCoxOnline(int n_features, double lambda, double eta)
    : lambda_(lambda), inner_(n_features, eta) {
    n_features_ = n_features;
}

double BoxCoxOnline::predict_one(const VectorXd& x) const {
    double z = inner_.predict_one(x);
    if (lambda_ != 0.0 && 1.0 + lambda_ * z <= 0.0) {
        // inverse would leave the transform's domain; pin to the boundary
        z = -1.0 / lambda_ + 1e-12;
        ++clamped_;
    }
    return boxcox_inverse(z, lambda_);
}

void BoxCoxOnline::learn_one(const VectorXd& x, double y) {
    inner_.learn_one(x, boxcox_transform(y, lambda_));
    ++updates_seen_;
}

nlohmann::json BoxCoxOnline::state_json() const {
    return {{"inner", inner_.state_json()}, {"clamped", clamped_},
            {"updates_seen", updates_seen_}};
}

void BoxCoxOnline::load_state(const nlohmann::json& state) {
    inner_.load_state(state.at("inner"));
    clamped_ = state.at("clamped").get<std::uint64_t>();
    updates_seen_ = state.at("updates_seen").get<std::uint64_t>();
    n_features_ = inner_.n_features();
}

OnlineMlp::OnlineMlp(int n_features, MlpParams params)
    : learning_rate_(params.learning_rate), net_(params) {
    net_.initialize(n_features);
    n_features_ = n_features;
}

double OnlineMlp::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    return net_.predict_one(x);
}

void OnlineMlp::learn_one(const VectorXd& x, double y) {
    check_dim(x.size());
    if (learning_rate_ != 0.0) net_.step_single(x, y, learning_rate_);
    ++updates_seen_;
}

nlohmann::json OnlineMlp::state_json() const {
    auto state = net_.state_json();
    state["updates_seen"] = updates_seen_;
    return state;
}

void OnlineMlp::load_state(const nlohmann::json& state) {
    net_.load_state(state);
    updates_seen_ = state.at("updates_seen").get<std::uint64_t>();
    n_features_ = net_.n_features();
}

ScaledTargetOnline::ScaledTargetOnline(std::unique_ptr<OnlineRegressor> inner,
                                       MinMaxScaler target_scaler)
    : inner_(std::move(inner)), scaler_(std::move(target_scaler)) {
    n_features_ = inner_->n_features();
}

double ScaledTargetOnline::predict_one(const VectorXd& x) const {
    return scaler_.inverse_transform_scalar(inner_->predict_one(x));
}

void ScaledTargetOnline::learn_one(const VectorXd& x, double y) {
    inner_->learn_one(x, scaler_.transform_scalar(y));
    ++updates_seen_;
}

nlohmann::json ScaledTargetOnline::params_json() const {
    return {{"inner_kind", inner_->kind()}, {"inner_params", inner_->params_json()}};
}

nlohmann::json ScaledTargetOnline::state_json() const {
    return {{"inner", online_document(*inner_)}, {"scaler", scaler_.to_json()},
            {"updates_seen", updates_seen_}};
}

void ScaledTargetOnline::load_state(const nlohmann::json& state) {
    inner_ = online_from_document(state.at("inner"));
    scaler_ = MinMaxScaler::from_json(state.at("scaler"));
    updates_seen_ = state.at("updates_seen").get<std::uint64_t>();
    n_features_ = inner_->n_features();
}

std::unique_ptr<OnlineRegressor> make_online_regressor(const std::string& kind,
                                                       int n_features,
                                                       const nlohmann::json& params) {
    const auto& p = params;
    if (kind == "online_linear")
        return std::make_unique<OnlineLinear>(n_features, p.value("eta", 0.01));
    if (kind == "passive_aggressive")
        return std::make_unique<PassiveAggressive>(
            n_features, p.value("C", 1.0), p.value("epsilon", 0.0),
            p.value("fit_intercept", true), p.value("max_iterations", 1),
            p.value("shuffle", false), p.value("tolerance", 0.001));
    if (kind == "boxcox_linear")
        return std::make_unique<BoxCoxOnline>(n_features, p.value("lambda", 0.1),
                                              p.value("eta", 0.01));
    if (kind == "online_mlp") {
        MlpParams mp;
        mp.hidden_sizes = p.value("hidden_sizes", std::vector<int>{50});
        mp.activation = p.value("activation", std::string("relu"));
        mp.l2_alpha = p.value("l2_alpha", 5e-5);
        mp.learning_rate = p.value("learning_rate", 0.01);
        mp.seed = p.value("seed", std::uint64_t{0});
        return std::make_unique<OnlineMlp>(n_features, mp);
    }
    if (kind == "scaled_target") {
        auto inner = make_online_regressor(p.at("inner_kind").get<std::string>(),
                                           n_features,
                                           p.value("inner_params", nlohmann::json::object()));
        auto scaler = MinMaxScaler::fit_vector(
            from_std(p.at("target_range").get<std::vector<double>>()));
        return std::make_unique<ScaledTargetOnline>(std::move(inner), std::move(scaler));
    }
    fail("UnknownAlgorithm", "'" + kind + "'");
}

nlohmann::json online_document(const OnlineRegressor& model) {
    return {{"format_version", kOnlineFormatVersion},
            {"kind", model.kind()},
            {"params", model.params_json()},
            {"n_features", model.n_features()},
            {"updates_seen", model.updates_seen()},
            {"state", model.state_json()}};
}

std::unique_ptr<OnlineRegressor> online_from_document(const nlohmann::json& doc) {
    if (doc.value("format_version", -1) != kOnlineFormatVersion)
        fail("UnsupportedFormatVersion", doc.dump().substr(0, 120));
    const auto kind = doc.at("kind").get<std::string>();
    const int nf = doc.at("n_features").get<int>();
    std::unique_ptr<OnlineRegressor> model;
    if (kind == "scaled_target") {
        // the scaler lives in the state; bootstrap with a placeholder inner
        auto inner = online_from_document(doc.at("state").at("inner"));
        model = std::make_unique<ScaledTargetOnline>(std::move(inner), MinMaxScaler{});
    } else {
        model = make_online_regressor(kind, nf, doc.value("params", nlohmann::json::object()));
    }
    model->load_state(doc.at("state"));
    return model;
}

ProgressiveResult progressive_validation(OnlineRegressor& model,
                                         const FeatureMatrix& pretrain,
                                         const FeatureMatrix& stream) {
    for (Eigen::Index i = 0; i < pretrain.rows.rows(); ++i)
        model.learn_one(pretrain.rows.row(i), pretrain.targets[i]);

    ProgressiveResult res;
    const auto n = stream.rows.rows();
    res.predictions.reserve(static_cast<std::size_t>(n));
    res.residuals.reserve(static_cast<std::size_t>(n));
    res.step_errors.assign(static_cast<std::size_t>(n), "");
    double abs_sum = 0.0, sq_sum = 0.0;
    std::size_t clean = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        try {
            const double pred = model.predict_one(stream.rows.row(i));
            const double resid = stream.targets[i] - pred;
            model.learn_one(stream.rows.row(i), stream.targets[i]);
            res.predictions.push_back(pred);
            res.residuals.push_back(resid);
            abs_sum += std::abs(resid);
            sq_sum += resid * resid;
            ++clean;
        } catch (const Error& e) {
            res.predictions.push_back(std::numeric_limits<double>::quiet_NaN());
            res.residuals.push_back(std::numeric_limits<double>::quiet_NaN());
            res.step_errors[static_cast<std::size_t>(i)] = e.code();
            ++res.missing;
        }
    }
    if (clean > 0) {
        res.mae = abs_sum / static_cast<double>(clean);
        res.rmse = std::sqrt(sq_sum / static_cast<double>(clean));
    }
    return res;
}

}  // namespace gridcast
