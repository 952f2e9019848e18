#pragma once

#include <vector>

#include "gridcast/regressor.hpp"

namespace gridcast {

struct MlpParams {
    std::vector<int> hidden_sizes = {50};
    std::string activation = "relu";  // "tanh" or "relu"
    double l2_alpha = 5e-5;
    double learning_rate = 0.01;
    int epochs = 200;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

// Fully connected network with a linear output unit, trained by
// mini-batch backpropagation on SSE + l2_alpha * ||W||^2 (biases
// unpenalized). Weights init uniform in +-sqrt(6/(fan_in+fan_out)).
class MlpRegressor final : public Regressor {
public:
    explicit MlpRegressor(MlpParams params = {}) : params_(params) {}

    void fit(const MatrixXd& X, const VectorXd& y) override;
    double predict_one(const VectorXd& x) const override;

    // seeded initialization without training; the zero-epoch contract
    void initialize(int n_features);
    bool initialized() const { return !weights_.empty(); }

    // one backpropagation step on a single example (batch size 1)
    void step_single(const VectorXd& x, double y, double learning_rate);

    // full-batch loss and flattened gradient, for finite-difference checks
    std::pair<double, VectorXd> loss_and_gradient(const MatrixXd& X,
                                                  const VectorXd& y) const;
    VectorXd flat_parameters() const;
    void set_flat_parameters(const VectorXd& theta);

    std::string kind() const override { return "mlp"; }
    nlohmann::json params_json() const override;
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    double activate(double z) const;
    double activate_deriv(double z) const;
    void forward(const VectorXd& x, std::vector<VectorXd>& pre,
                 std::vector<VectorXd>& post) const;
    void accumulate_gradient(const VectorXd& x, double target,
                             std::vector<MatrixXd>& gw, std::vector<VectorXd>& gb,
                             double* loss) const;

    MlpParams params_;
    std::vector<MatrixXd> weights_;  // layer l: (out x in)
    std::vector<VectorXd> biases_;
};

}  // namespace gridcast
