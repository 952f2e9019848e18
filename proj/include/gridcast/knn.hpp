#pragma once

#include "gridcast/regressor.hpp"

namespace gridcast {

// Mean of the k nearest training targets by Euclidean distance;
// distance ties break on the lower training-row index.
class KnnRegressor final : public Regressor {
public:
    explicit KnnRegressor(int k = 5) : k_(k) {}

    void fit(const MatrixXd& X, const VectorXd& y) override;
    double predict_one(const VectorXd& x) const override;

    std::string kind() const override { return "knn"; }
    nlohmann::json params_json() const override { return {{"k", k_}}; }
    nlohmann::json state_json() const override;
    void load_state(const nlohmann::json& state) override;

private:
    int k_;
    MatrixXd X_;
    VectorXd y_;
};

}  // namespace gridcast
