#include "gridcast/regressor.hpp"

#include <fstream>

#include "gridcast/ensemble.hpp"
#include "gridcast/knn.hpp"
#include "gridcast/linear_models.hpp"
#include "gridcast/mlp.hpp"
#include "gridcast/svr.hpp"

namespace gridcast {

namespace {
constexpr int kModelFormatVersion = 1;
}

std::vector<double> to_std(const VectorXd& v) {
    return std::vector<double>(v.begin(), v.end());
}

VectorXd from_std(const std::vector<double>& v) {
    return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void Regressor::check_dim(Eigen::Index cols) const {
    if (n_features_ < 0) fail("NotFitted", kind() + " used before fit");
    if (cols != n_features_)
        fail("DimensionMismatch", kind() + " fitted on " + std::to_string(n_features_) +
                                      " features, got " + std::to_string(cols));
}

void Regressor::require_finite(const MatrixXd& X, const VectorXd& y) {
    if (X.rows() != y.size())
        fail("DimensionMismatch", "rows(X)=" + std::to_string(X.rows()) +
                                      " vs |y|=" + std::to_string(y.size()));
    if (!X.allFinite() || !y.allFinite())
        fail("NonFiniteInput", "training data contains non-finite values");
}

VectorXd Regressor::predict(const MatrixXd& X) const {
    if (X.rows() > 0) check_dim(X.cols());
    VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = predict_one(X.row(i));
    return out;
}

std::unique_ptr<Regressor> make_regressor(const std::string& kind,
                                          const nlohmann::json& params) {
    const auto& p = params;
    if (kind == "linear" || kind == "ols")
        return std::make_unique<OlsRegressor>(p.value("allow_singular", false));
    if (kind == "ridge") return std::make_unique<RidgeRegressor>(p.value("lambda", 1.0));
    if (kind == "lasso")
        return std::make_unique<LassoRegressor>(p.value("lambda", 1.0), p.value("tol", 1e-6),
                                                p.value("max_sweeps", 10000));
    if (kind == "elastic_net")
        return std::make_unique<ElasticNetRegressor>(p.value("lambda", 1.0),
                                                     p.value("alpha", 0.5),
                                                     p.value("tol", 1e-6),
                                                     p.value("max_sweeps", 10000));
    if (kind == "knn") return std::make_unique<KnnRegressor>(p.value("k", 5));
    if (kind == "tree")
        return std::make_unique<DecisionTreeRegressor>(tree_params_from_json(p));
    if (kind == "random_forest")
        return std::make_unique<RandomForestRegressor>(
            p.value("n_estimators", 16), p.value("features_per_split", 0),
            tree_params_from_json(p.value("base", nlohmann::json::object())),
            p.value("seed", std::uint64_t{0}));
    if (kind == "extra_trees")
        return std::make_unique<ExtraTreesRegressor>(
            p.value("n_estimators", 16), p.value("features_per_split", -1),
            tree_params_from_json(p.value("base", nlohmann::json::object())),
            p.value("seed", std::uint64_t{0}));
    if (kind == "adaboost")
        return std::make_unique<AdaBoostRegressor>(
            p.value("n_estimators", 16),
            tree_params_from_json(p.value("base", nlohmann::json::object())),
            p.value("seed", std::uint64_t{0}));
    if (kind == "gradient_boosting")
        return std::make_unique<GradientBoostingRegressor>(
            p.value("n_estimators", 16), p.value("learning_rate", 1.0),
            tree_params_from_json(p.value("base", nlohmann::json::object())),
            p.value("seed", std::uint64_t{0}));
    if (kind == "svr") {
        const auto kernel = p.value("kernel", std::string("linear"));
        if (kernel != "linear")
            fail("UnsupportedHyperparam", "svr kernel '" + kernel + "' is not supported");
        return std::make_unique<LinearSvrRegressor>(
            p.value("C", 1.0), p.value("epsilon", 0.1), p.value("epochs", 300),
            p.value("seed", std::uint64_t{0}), p.value("eta0", 0.05),
            p.value("patience", 30));
    }
    if (kind == "mlp") {
        MlpParams mp;
        mp.hidden_sizes = p.value("hidden_sizes", std::vector<int>{50});
        mp.activation = p.value("activation", std::string("relu"));
        if (mp.activation != "relu" && mp.activation != "tanh")
            fail("UnsupportedHyperparam", "mlp activation '" + mp.activation + "'");
        mp.l2_alpha = p.value("l2_alpha", 5e-5);
        mp.learning_rate = p.value("learning_rate", 0.01);
        mp.epochs = p.value("epochs", 200);
        mp.batch_size = p.value("batch_size", 32);
        mp.seed = p.value("seed", std::uint64_t{0});
        return std::make_unique<MlpRegressor>(mp);
    }
    fail("UnknownAlgorithm", "'" + kind + "'");
}

nlohmann::json model_document(const Regressor& model, const nlohmann::json& extra) {
    nlohmann::json doc = {{"format_version", kModelFormatVersion},
                          {"kind", model.kind()},
                          {"params", model.params_json()},
                          {"n_features", model.n_features()},
                          {"state", model.state_json()}};
    if (!extra.empty()) doc["extra"] = extra;
    return doc;
}

std::unique_ptr<Regressor> model_from_document(const nlohmann::json& doc) {
    if (doc.value("format_version", -1) != kModelFormatVersion)
        fail("UnsupportedFormatVersion", doc.value("format_version", nlohmann::json{}).dump());
    auto model = make_regressor(doc.at("kind").get<std::string>(), doc.value("params", nlohmann::json::object()));
    model->load_state(doc.at("state"));
    return model;
}

void save_model(const std::string& path, const Regressor& model,
                const nlohmann::json& extra) {
    std::ofstream out(path);
    if (!out) fail("FileNotFound", "cannot write " + path);
    out << model_document(model, extra).dump(2) << "\n";
}

std::unique_ptr<Regressor> load_model(const std::string& path, nlohmann::json* extra_out) {
    std::ifstream in(path);
    if (!in) fail("FileNotFound", path);
    nlohmann::json doc;
    in >> doc;
    if (extra_out) *extra_out = doc.value("extra", nlohmann::json::object());
    return model_from_document(doc);
}

}  // namespace gridcast
