#include "gridcast/mlp.hpp"

namespace gridcast {

double MlpRegressor::activate(double z) const {
    return params_.activation == "tanh" ? std::tanh(z) : std::max(0.0, z);
}

double MlpRegressor::activate_deriv(double z) const {
    if (params_.activation == "tanh") {
        const double t = std::tanh(z);
        return 1.0 - t * t;
    }
    return z > 0.0 ? 1.0 : 0.0;
}

void MlpRegressor::initialize(int n_features) {
    if (n_features < 1) fail("InvalidArgument", "n_features >= 1");
    if (params_.hidden_sizes.empty()) fail("InvalidArgument", "hidden_sizes non-empty");
    if (params_.activation != "tanh" && params_.activation != "relu")
        fail("UnsupportedHyperparam", "activation '" + params_.activation + "'");
    std::vector<int> sizes;
    sizes.push_back(n_features);
    for (int h : params_.hidden_sizes) sizes.push_back(h);
    sizes.push_back(1);

    Rng rng(params_.seed);
    weights_.clear();
    biases_.clear();
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l], fan_out = sizes[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        MatrixXd W(fan_out, fan_in);
        for (Eigen::Index r = 0; r < W.rows(); ++r)
            for (Eigen::Index c = 0; c < W.cols(); ++c)
                W(r, c) = rng.uniform(-bound, bound);
        weights_.push_back(std::move(W));
        biases_.push_back(VectorXd::Zero(fan_out));
    }
    n_features_ = n_features;
}

void MlpRegressor::forward(const VectorXd& x, std::vector<VectorXd>& pre,
                           std::vector<VectorXd>& post) const {
    pre.clear();
    post.clear();
    VectorXd a = x;
    post.push_back(a);
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        VectorXd z = weights_[l] * a + biases_[l];
        pre.push_back(z);
        if (l + 1 < weights_.size())
            a = z.unaryExpr([this](double v) { return activate(v); });
        else
            a = z;  // linear output unit
        post.push_back(a);
    }
}

double MlpRegressor::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    std::vector<VectorXd> pre, post;
    forward(x, pre, post);
    return post.back()[0];
}

void MlpRegressor::accumulate_gradient(const VectorXd& x, double target,
                                       std::vector<MatrixXd>& gw,
                                       std::vector<VectorXd>& gb, double* loss) const {
    std::vector<VectorXd> pre, post;
    forward(x, pre, post);
    const double err = post.back()[0] - target;
    *loss += err * err;

    VectorXd delta = VectorXd::Constant(1, 2.0 * err);
    for (auto l = static_cast<long>(weights_.size()) - 1; l >= 0; --l) {
        const auto ul = static_cast<std::size_t>(l);
        gw[ul] += delta * post[ul].transpose();
        gb[ul] += delta;
        if (l > 0) {
            VectorXd back = weights_[ul].transpose() * delta;
            const VectorXd& z = pre[ul - 1];
            delta = back.cwiseProduct(
                z.unaryExpr([this](double v) { return activate_deriv(v); }));
        }
    }
}

std::pair<double, VectorXd> MlpRegressor::loss_and_gradient(const MatrixXd& X,
                                                            const VectorXd& y) const {
    if (weights_.empty()) fail("NotFitted", "mlp not initialized");
    std::vector<MatrixXd> gw;
    std::vector<VectorXd> gb;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        gw.push_back(MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
        gb.push_back(VectorXd::Zero(biases_[l].size()));
    }
    double loss = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        accumulate_gradient(X.row(i), y[i], gw, gb, &loss);
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        loss += params_.l2_alpha * weights_[l].squaredNorm();
        gw[l] += 2.0 * params_.l2_alpha * weights_[l];
    }

    // flatten in (W0, b0, W1, b1, ...) order
    Eigen::Index total = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l)
        total += weights_[l].size() + biases_[l].size();
    VectorXd flat(total);
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        flat.segment(at, gw[l].size()) = Eigen::Map<VectorXd>(gw[l].data(), gw[l].size());
        at += gw[l].size();
        flat.segment(at, gb[l].size()) = gb[l];
        at += gb[l].size();
    }
    return {loss, flat};
}

VectorXd MlpRegressor::flat_parameters() const {
    Eigen::Index total = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l)
        total += weights_[l].size() + biases_[l].size();
    VectorXd flat(total);
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        flat.segment(at, weights_[l].size()) =
            Eigen::Map<const VectorXd>(weights_[l].data(), weights_[l].size());
        at += weights_[l].size();
        flat.segment(at, biases_[l].size()) = biases_[l];
        at += biases_[l].size();
    }
    return flat;
}

void MlpRegressor::set_flat_parameters(const VectorXd& theta) {
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Eigen::Map<VectorXd>(weights_[l].data(), weights_[l].size()) =
            theta.segment(at, weights_[l].size());
        at += weights_[l].size();
        biases_[l] = theta.segment(at, biases_[l].size());
        at += biases_[l].size();
    }
    if (at != theta.size()) fail("DimensionMismatch", "flat parameter vector size");
}

void MlpRegressor::step_single(const VectorXd& x, double y, double learning_rate) {
    if (weights_.empty()) fail("NotFitted", "mlp not initialized");
    std::vector<MatrixXd> gw;
    std::vector<VectorXd> gb;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        gw.push_back(MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
        gb.push_back(VectorXd::Zero(biases_[l].size()));
    }
    double loss = 0.0;
    accumulate_gradient(x, y, gw, gb, &loss);
    if (!std::isfinite(loss)) fail("DivergedLoss", "single-step loss is non-finite");
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        gw[l] += 2.0 * params_.l2_alpha * weights_[l];
        weights_[l] -= learning_rate * gw[l];
        biases_[l] -= learning_rate * gb[l];
    }
}

void MlpRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    initialize(static_cast<int>(X.cols()));
    if (params_.epochs == 0) return;  // seeded forward pass only

    Rng rng(params_.seed + 0x9e3779b97f4a7c15ULL);  // separate stream from init
    const auto n = static_cast<std::size_t>(X.rows());
    const int bs = std::max(1, params_.batch_size);
    std::vector<MatrixXd> gw;
    std::vector<VectorXd> gb;
    for (int epoch = 0; epoch < params_.epochs; ++epoch) {
        const auto order = rng.permutation(n);
        for (std::size_t at = 0; at < n; at += static_cast<std::size_t>(bs)) {
            const auto end = std::min(n, at + static_cast<std::size_t>(bs));
            gw.clear();
            gb.clear();
            for (std::size_t l = 0; l < weights_.size(); ++l) {
                gw.push_back(MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
                gb.push_back(VectorXd::Zero(biases_[l].size()));
            }
            double loss = 0.0;
            for (std::size_t i = at; i < end; ++i)
                accumulate_gradient(X.row(static_cast<Eigen::Index>(order[i])),
                                    y[static_cast<Eigen::Index>(order[i])], gw, gb, &loss);
            if (!std::isfinite(loss))
                fail("DivergedLoss", "epoch " + std::to_string(epoch) +
                                         " minibatch loss is non-finite");
            const double scale = params_.learning_rate / static_cast<double>(end - at);
            for (std::size_t l = 0; l < weights_.size(); ++l) {
                gw[l] += 2.0 * params_.l2_alpha * weights_[l];
                weights_[l] -= scale * gw[l];
                biases_[l] -= scale * gb[l];
            }
        }
    }
}

nlohmann::json MlpRegressor::params_json() const {
    return {{"hidden_sizes", params_.hidden_sizes}, {"activation", params_.activation},
            {"l2_alpha", params_.l2_alpha}, {"learning_rate", params_.learning_rate},
            {"epochs", params_.epochs}, {"batch_size", params_.batch_size},
            {"seed", params_.seed}};
}

nlohmann::json MlpRegressor::state_json() const {
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(weights_[l].rows()));
        for (Eigen::Index r = 0; r < weights_[l].rows(); ++r)
            rows[static_cast<std::size_t>(r)] = to_std(weights_[l].row(r));
        layers.push_back({{"W", rows}, {"b", to_std(biases_[l])}});
    }
    return {{"layers", layers}, {"n_features", n_features_}};
}

void MlpRegressor::load_state(const nlohmann::json& state) {
    weights_.clear();
    biases_.clear();
    for (const auto& layer : state.at("layers")) {
        const auto rows = layer.at("W").get<std::vector<std::vector<double>>>();
        MatrixXd W(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(rows.empty() ? 0 : rows[0].size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            W.row(static_cast<Eigen::Index>(r)) = from_std(rows[r]).transpose();
        weights_.push_back(std::move(W));
        biases_.push_back(from_std(layer.at("b").get<std::vector<double>>()));
    }
    n_features_ = state.at("n_features").get<int>();
}

}  // namespace gridcast
