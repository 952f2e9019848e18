#pragma once

#include <memory>

#include "gridcast/features.hpp"
#include "gridcast/metrics.hpp"
#include "gridcast/online.hpp"
#include "gridcast/regressor.hpp"

namespace gridcast {

// Day-ahead pipeline configuration: one independent model per target
// hour, features/targets scaled on the training window only.
struct PipelineConfig {
    bool online = false;
    std::string kind = "extra_trees";  // offline regressor or online learner kind
    nlohmann::json params = nlohmann::json::object();
    std::set<int> lag_days = {1, 2, 7, 30};
    int lag_window = 28;
    Date boundary;  // rows with date < boundary train, the rest test
};

struct HourArtifacts {
    int hour = 0;
    nlohmann::json model;  // serialized model / online checkpoint
    std::size_t n_train = 0, n_test = 0;
};

struct OrchestrateResult {
    std::vector<HourArtifacts> hours;     // one per target hour, 0..23
    std::vector<Date> dates;              // pooled, (date, hour) ascending
    std::vector<int> pooled_hours;        // aligned with dates
    std::vector<double> actuals;          // MWh
    std::vector<double> predictions;      // MWh (NaN for errored online steps)
    std::vector<double> residuals;        // actual - prediction, MWh
    MetricReport metrics;                 // over clean pooled steps
};

OrchestrateResult per_hour_orchestrate(const DemandSeries& series,
                                       const SeasonTable& seasons,
                                       const PipelineConfig& config);

// Shipped drift scenario: three synthetic years with a persistent upward
// drift, batch learner frozen after year two, online learner adapting
// through year three.
struct DriftBenchmark {
    double online_mae = 0.0;   // box-cox online linear
    double offline_mae = 0.0;  // extra trees, 32 estimators
};

DriftBenchmark run_drift_benchmark(std::uint64_t seed = 1);

}  // namespace gridcast
