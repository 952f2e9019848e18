#include "gridcast/knn.hpp"

#include <algorithm>

namespace gridcast {

void KnnRegressor::fit(const MatrixXd& X, const VectorXd& y) {
    require_finite(X, y);
    if (k_ < 1 || k_ > X.rows())
        fail("KTooLarge", "k=" + std::to_string(k_) + " with " + std::to_string(X.rows()) +
                              " training rows");
    X_ = X;
    y_ = y;
    n_features_ = static_cast<int>(X.cols());
}

double KnnRegressor::predict_one(const VectorXd& x) const {
    check_dim(x.size());
    std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(X_.rows()));
    for (Eigen::Index i = 0; i < X_.rows(); ++i)
        dist[static_cast<std::size_t>(i)] = {(X_.row(i).transpose() - x).squaredNorm(), i};
    std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());
    double sum = 0.0;
    for (int i = 0; i < k_; ++i) sum += y_[dist[static_cast<std::size_t>(i)].second];
    return sum / k_;
}

nlohmann::json KnnRegressor::state_json() const {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(X_.rows()));
    for (Eigen::Index i = 0; i < X_.rows(); ++i)
        rows[static_cast<std::size_t>(i)] = to_std(X_.row(i));
    return {{"X", rows}, {"y", to_std(y_)}};
}

void KnnRegressor::load_state(const nlohmann::json& state) {
    const auto rows = state.at("X").get<std::vector<std::vector<double>>>();
    y_ = from_std(state.at("y").get<std::vector<double>>());
    if (rows.empty()) fail("EmptySplit", "knn state has no rows");
    X_.resize(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        X_.row(static_cast<Eigen::Index>(i)) = from_std(rows[i]).transpose();
    n_features_ = static_cast<int>(X_.cols());
}

}  // namespace gridcast
