#include "gridcast/linear_models.hpp"

namespace gridcast {

double LinearModelBase::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    return w_.dot(x) + b_;
}

nlohmann::json LinearModelBase::state_json() const {
    return {{"weights", to_std(w_)}, {"intercept", b_}};
}

void LinearModelBase::load_state(const nlohmann::json& state) {
    w_ = from_std(state.at("weights").get<std::vector<double>>());
    b_ = state.at("intercept").get<double>();
    n_features_ = static_cast<int>(w_.size());
}

void OlsRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (X.rows() < X.cols() + 1)
        fail("SingularDesign", "need rows >= cols + 1 for an intercepted fit");
    MatrixXd A(X.rows(), X.cols() + 1);
    A.leftCols(X.cols()) = X;
    A.col(X.cols()).setOnes();
    Eigen::ColPivHouseholderQR<MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < A.cols() && !allow_singular_)
        fail("SingularDesign", "design matrix is rank deficient (rank " +
                                   std::to_string(qr.rank()) + " of " +
                                   std::to_string(A.cols()) + ")");
    const VectorXd beta = qr.solve(y);
    w_ = beta.head(X.cols());
    b_ = beta[X.cols()];
    n_features_ = static_cast<int>(X.cols());
}

void RidgeRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (lambda_ < 0.0) fail("InvalidArgument", "lambda must be >= 0");
    const Eigen::RowVectorXd x_mean = X.colwise().mean();
    const double y_mean = y.mean();
    const MatrixXd Xc = X.rowwise() - x_mean;
    const VectorXd yc = y.array() - y_mean;
    MatrixXd G = Xc.transpose() * Xc;
    G.diagonal().array() += lambda_;
    if (lambda_ == 0.0) {
        // fall back to the OLS path so the lambda=0 contract holds exactly
        OlsRegressor ols;
        ols.fit(X, y);
        w_ = ols.weights();
        b_ = ols.intercept();
    } else {
        w_ = G.ldlt().solve(Xc.transpose() * yc);
        b_ = y_mean - x_mean.dot(w_);
    }
    n_features_ = static_cast<int>(X.cols());
}

namespace {
inline double soft_threshold(double rho, double gamma) {
    if (rho > gamma) return rho - gamma;
    if (rho < -gamma) return rho + gamma;
    return 0.0;
}
}  // namespace

CoordinateDescentResult coordinate_descent_enet(const MatrixXd& X, const VectorXd& y,
                                                double lambda, double alpha, double tol,
                                                int max_sweeps) {
    const auto n = static_cast<double>(X.rows());
    const Eigen::RowVectorXd x_mean = X.colwise().mean();
    const double y_mean = y.mean();
    const MatrixXd Xc = X.rowwise() - x_mean;
    const VectorXd yc = y.array() - y_mean;

    const Eigen::Index d = X.cols();
    VectorXd col_sq(d);
    for (Eigen::Index j = 0; j < d; ++j) col_sq[j] = Xc.col(j).squaredNorm() / n;

    CoordinateDescentResult res;
    res.weights = VectorXd::Zero(d);
    VectorXd r = yc;  // residual y - Xw (centered)
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (col_sq[j] == 0.0) continue;
            const double old = res.weights[j];
            const double rho = Xc.col(j).dot(r) / n + col_sq[j] * old;
            const double next =
                soft_threshold(rho, lambda * alpha) / (col_sq[j] + lambda * (1.0 - alpha));
            if (next != old) {
                r -= Xc.col(j) * (next - old);
                res.weights[j] = next;
                max_change = std::max(max_change, std::abs(next - old));
            }
        }
        res.sweeps = sweep + 1;
        res.last_change = max_change;
        if (max_change < tol) {
            res.converged = true;
            break;
        }
    }
    res.intercept = y_mean - x_mean.dot(res.weights);
    if (!res.converged)
        fail("NoConvergence", "coordinate descent: max coefficient change " +
                                  std::to_string(res.last_change) + " after " +
                                  std::to_string(res.sweeps) + " sweeps");
    return res;
}

double enet_objective(const MatrixXd& X, const VectorXd& y, const VectorXd& w,
                      double intercept, double lambda, double alpha) {
    const auto n = static_cast<double>(X.rows());
    const double rss = (y - X * w - VectorXd::Constant(X.rows(), intercept)).squaredNorm();
    return rss / (2.0 * n) +
           lambda * ((1.0 - alpha) / 2.0 * w.squaredNorm() + alpha * w.lpNorm<1>());
}

void LassoRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (lambda_ < 0.0) fail("InvalidArgument", "lambda must be >= 0");
    // Sum-form lasso loss ||y-Xb||^2 + lambda*||b||_1 maps onto the
    // (1/2n)-scaled solver with penalty lambda/(2n).
    const double scaled = lambda_ / (2.0 * static_cast<double>(X.rows()));
    const auto res = coordinate_descent_enet(X, y, scaled, 1.0, tol_, max_sweeps_);
    w_ = res.weights;
    b_ = res.intercept;
    n_features_ = static_cast<int>(X.cols());
}

void ElasticNetRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (lambda_ < 0.0 || alpha_ < 0.0 || alpha_ > 1.0)
        fail("InvalidArgument", "need lambda >= 0 and alpha in [0,1]");
    const auto res = coordinate_descent_enet(X, y, lambda_, alpha_, tol_, max_sweeps_);
    w_ = res.weights;
    b_ = res.intercept;
    n_features_ = static_cast<int>(X.cols());
}

}  // namespace gridcast
