#pragma once

#include "gridcast/linear_models.hpp"

namespace gridcast {

// Linear epsilon-insensitive SVR in the unconstrained primal:
//   0.5 ||w||^2 + C * sum_i max(0, |w.x_i + b - y_i| - eps)
// minimized by epoch-shuffled subgradient descent with best-so-far
// tracking; a least-squares warm start is also evaluated so the
// reported objective is never worse than the OLS point.
class LinearSvrRegressor final : public LinearModelBase {
public:
    LinearSvrRegressor(double C = 1.0, double epsilon = 0.1, int epochs = 300,
                       std::uint64_t seed = 0, double eta0 = 0.05, int patience = 30)
        : C_(C), epsilon_(epsilon), epochs_(epochs), seed_(seed), eta0_(eta0),
          patience_(patience) {}

    void fit(const MatrixXd& X, const VectorXd& y) override;

    double final_objective() const { return final_objective_; }
    bool no_improvement() const { return no_improvement_; }

    std::string kind() const override { return "svr"; }
    nlohmann::json params_json() const override {
        return {{"C", C_}, {"epsilon", epsilon_}, {"epochs", epochs_},
                {"seed", seed_}, {"eta0", eta0_}, {"patience", patience_},
                {"kernel", "linear"}};
    }

private:
    double C_, epsilon_;
    int epochs_;
    std::uint64_t seed_;
    double eta0_;
    int patience_;
    double final_objective_ = 0.0;
    bool no_improvement_ = false;
};

double svr_objective(const MatrixXd& X, const VectorXd& y, const VectorXd& w, double b,
                     double C, double epsilon);

}  // namespace gridcast
