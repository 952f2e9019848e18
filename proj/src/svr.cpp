#include "gridcast/svr.hpp"

namespace gridcast {

double svr_objective(const MatrixXd& X, const VectorXd& y, const VectorXd& w, double b,
                     double C, double epsilon) {
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double r = std::abs(X.row(i).dot(w) + b - y[i]);
        hinge += std::max(0.0, r - epsilon);
    }
    return 0.5 * w.squaredNorm() + C * hinge;
}

void LinearSvrRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (C_ <= 0.0) fail("InvalidArgument", "C > 0");
    if (epsilon_ < 0.0) fail("InvalidArgument", "epsilon >= 0");

    const auto n = static_cast<double>(X.rows());

    auto descend = [&](VectorXd w, double b, Rng& rng, bool* stalled) {
        double best_obj = svr_objective(X, y, w, b, C_, epsilon_);
        VectorXd best_w = w;
        double best_b = b;
        int since_improved = 0;
        for (int epoch = 0; epoch < epochs_; ++epoch) {
            const double eta = eta0_ / (1.0 + 5.0 * epoch / std::max(1, epochs_));
            const auto order = rng.permutation(static_cast<std::size_t>(X.rows()));
            for (const auto i : order) {
                const auto row = static_cast<Eigen::Index>(i);
                const double r = X.row(row).dot(w) + b - y[row];
                w -= (eta / n) * w;  // regularizer, spread across the epoch
                if (std::abs(r) > epsilon_) {
                    const double s = r > 0 ? 1.0 : -1.0;
                    w -= eta * C_ * s * X.row(row).transpose();
                    b -= eta * C_ * s;
                }
            }
            const double obj = svr_objective(X, y, w, b, C_, epsilon_);
            if (obj < best_obj - 1e-12 * std::max(1.0, best_obj)) {
                best_obj = obj;
                best_w = w;
                best_b = b;
                since_improved = 0;
            } else if (++since_improved >= patience_) {
                *stalled = true;
                break;
            }
        }
        return std::tuple{best_w, best_b, best_obj};
    };

    Rng rng(seed_);
    bool stalled = false;
    auto [w_cold, b_cold, obj_cold] = descend(VectorXd::Zero(X.cols()), 0.0, rng, &stalled);

    VectorXd w_best = w_cold;
    double b_best = b_cold, obj_best = obj_cold;
    try {
        OlsRegressor ols;
        ols.fit(X, y);
        bool warm_stalled = false;
        auto [w_warm, b_warm, obj_warm] =
            descend(ols.weights(), ols.intercept(), rng, &warm_stalled);
        if (obj_warm < obj_best) {
            w_best = w_warm;
            b_best = b_warm;
            obj_best = obj_warm;
            stalled = warm_stalled;
        }
    } catch (const Error&) {
        // singular design, cold start only
    }

    w_ = w_best;
    b_ = b_best;
    final_objective_ = obj_best;
    no_improvement_ = stalled;
    n_features_ = static_cast<int>(X.cols());
}

}  // namespace gridcast
