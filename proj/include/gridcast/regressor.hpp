#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "json.hpp"

#include "gridcast/common.hpp"

namespace gridcast {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Batch regressor interface. Fitted state is immutable after fit();
// predict never mutates and rejects mismatched feature dimensions.
class Regressor {
public:
    virtual ~Regressor() = default;

    virtual void fit(const MatrixXd& X, const VectorXd& y) = 0;
    virtual double predict_one(const VectorXd& x) const = 0;
    VectorXd predict(const MatrixXd& X) const;

    virtual std::string kind() const = 0;
    virtual nlohmann::json params_json() const = 0;
    virtual nlohmann::json state_json() const = 0;
    virtual void load_state(const nlohmann::json& state) = 0;

    int n_features() const { return n_features_; }

protected:
    void check_dim(Eigen::Index cols) const;
    void require_finite(const MatrixXd& X, const VectorXd& y);
    int n_features_ = -1;
};

std::unique_ptr<Regressor> make_regressor(const std::string& kind,
                                          const nlohmann::json& params);

// Self-describing model document: format version, algorithm kind,
// hyperparameters and flattened fitted state; optional extras (feature
// names, scaler state) travel alongside. Round-trips bit-exactly.
nlohmann::json model_document(const Regressor& model,
                              const nlohmann::json& extra = nlohmann::json::object());
std::unique_ptr<Regressor> model_from_document(const nlohmann::json& doc);

void save_model(const std::string& path, const Regressor& model,
                const nlohmann::json& extra = nlohmann::json::object());
std::unique_ptr<Regressor> load_model(const std::string& path,
                                      nlohmann::json* extra_out = nullptr);

std::vector<double> to_std(const VectorXd& v);
VectorXd from_std(const std::vector<double>& v);

}  // namespace gridcast
