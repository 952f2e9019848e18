#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridcast/features.hpp"
#include "gridcast/metrics.hpp"
#include "gridcast/regressor.hpp"

namespace gridcast {

// Per-parameter candidate lists; combinations are the Cartesian product.
struct HyperparamGrid {
    std::map<std::string, std::vector<nlohmann::json>> values;

    std::vector<nlohmann::json> combinations() const;
};

enum class CvMode { random, time_ordered };

struct GridRow {
    nlohmann::json params;
    bool failed = false;
    std::string error;  // code of the first failing fold
    double mean_mae = 0.0, sd_mae = 0.0;
    double mean_mse = 0.0, mean_rmse = 0.0;
    std::optional<double> mean_r2;
    double mean_fit_time = 0.0, mean_score_time = 0.0;
    int folds = 0;
};

struct GridSearchReport {
    std::string kind;
    CvMode mode = CvMode::random;
    std::vector<GridRow> rows;  // ranked: mean MAE, ties by mean fit time; failures last

    // one delimited row per combination: estimator, params, mean fit time,
    // mean score time, mean MSE, mean RMSE, mean MAE, mean R^2
    std::string table(char delim = '\t') const;
};

// Evaluates the full product with n_splits fit/score cycles each. Random
// mode shuffles rows per split (seeded); time_ordered uses expanding
// windows over the row order. Features and targets are min-max scaled
// per fold on the training part only; metrics are in original units.
// Failing combinations are recorded, never fatal.
GridSearchReport grid_search(const std::string& kind, const HyperparamGrid& grid,
                             const FeatureMatrix& matrix, int n_splits = 10,
                             CvMode mode = CvMode::random, std::uint64_t seed = 0);

}  // namespace gridcast
