#pragma once

#include "gridcast/regressor.hpp"

namespace gridcast {

class LinearModelBase : public Regressor {
public:
    double predict_one(const VectorXd& x) const override;
    const VectorXd& weights() const { return w_; }
    double intercept() const { return b_; }

    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

protected:
    VectorXd w_;
    double b_ = 0.0;
};

// Least squares with an explicit intercept, solved by column-pivoted QR.
// With allow_singular the pivoted QR solve is kept on rank-deficient
// designs (dependent directions get zero weight) instead of erroring;
// calendar one-hot blocks are exactly collinear with the intercept, so
// the pipeline relies on this.
class OlsRegressor final : public LinearModelBase {
public:
    explicit OlsRegressor(bool allow_singular = false)
        : allow_singular_(allow_singular) {}
    void fit(const MatrixXd& X, const VectorXd& y) override;
    std::string kind() const override { return "linear"; }
    nlohmann::json params_json() const override {
        if (!allow_singular_) return nlohmann::json::object();
        return {{"allow_singular", true}};
    }

private:
    bool allow_singular_;
};

// ||y - Xb||^2 + lambda ||b||^2 with the intercept left unpenalized.
class RidgeRegressor final : public LinearModelBase {
public:
    explicit RidgeRegressor(double lambda = 1.0) : lambda_(lambda) {}
    void fit(const MatrixXd& X, const VectorXd& y) override;
    std::string kind() const override { return "ridge"; }
    nlohmann::json params_json() const override { return {{"lambda", lambda_}}; }

private:
    double lambda_;
};

// Coordinate descent on (1/2n)||y-Xb||^2 + lam((1-alpha)/2 ||b||^2 + alpha ||b||_1).
// Lasso maps its lambda (the unscaled-loss penalty) onto this form.
struct CoordinateDescentResult {
    VectorXd weights;
    double intercept = 0.0;
    int sweeps = 0;
    double last_change = 0.0;
    bool converged = false;
};

CoordinateDescentResult coordinate_descent_enet(const MatrixXd& X, const VectorXd& y,
                                                double lambda, double alpha, double tol,
                                                int max_sweeps);

class LassoRegressor final : public LinearModelBase {
public:
    explicit LassoRegressor(double lambda = 1.0, double tol = 1e-6, int max_sweeps = 10000)
        : lambda_(lambda), tol_(tol), max_sweeps_(max_sweeps) {}
    void fit(const MatrixXd& X, const VectorXd& y) override;
    std::string kind() const override { return "lasso"; }
    nlohmann::json params_json() const override {
        return {{"lambda", lambda_}, {"tol", tol_}, {"max_sweeps", max_sweeps_}};
    }

private:
    double lambda_, tol_;
    int max_sweeps_;
};

class ElasticNetRegressor final : public LinearModelBase {
public:
    explicit ElasticNetRegressor(double lambda = 1.0, double alpha = 0.5, double tol = 1e-6,
                                 int max_sweeps = 10000)
        : lambda_(lambda), alpha_(alpha), tol_(tol), max_sweeps_(max_sweeps) {}
    void fit(const MatrixXd& X, const VectorXd& y) override;
    std::string kind() const override { return "elastic_net"; }
    nlohmann::json params_json() const override {
        return {{"lambda", lambda_}, {"alpha", alpha_}, {"tol", tol_},
                {"max_sweeps", max_sweeps_}};
    }

private:
    double lambda_, alpha_, tol_;
    int max_sweeps_;
};

// Elastic-net objective value; used by tests and by the minimality checks.
double enet_objective(const MatrixXd& X, const VectorXd& y, const VectorXd& w,
                      double intercept, double lambda, double alpha);

}  // namespace gridcast
