#include "gridcast/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace gridcast {

namespace {

struct PooledStep {
    Date date;
    int hour;
    double actual;
    double prediction;  // NaN if the step errored
};

}  // namespace

OrchestrateResult per_hour_orchestrate(const DemandSeries& series,
                                       const SeasonTable& seasons,
                                       const PipelineConfig& config) {
    const auto calendar = label_calendar(series, seasons);
    OrchestrateResult result;
    std::vector<PooledStep> pooled;

    for (int hour = 0; hour < 24; ++hour) {
        const auto matrix =
            build_features(series, calendar, hour, config.lag_days, config.lag_window);
        const auto [train, test] = split_train_test(matrix, config.boundary);
        if (train.rows.rows() == 0 || test.rows.rows() == 0)
            fail("EmptySplit", "hour " + std::to_string(hour) +
                                   ": train or test window has no rows");

        const auto xs = MinMaxScaler::fit(train.rows);
        const MatrixXd Xtr = xs.transform(train.rows);
        const MatrixXd Xte = xs.transform(test.rows);

        HourArtifacts art;
        art.hour = hour;
        art.n_train = static_cast<std::size_t>(train.rows.rows());
        art.n_test = static_cast<std::size_t>(test.rows.rows());

        if (!config.online) {
            const auto ys = MinMaxScaler::fit_vector(train.targets);
            auto model = make_regressor(config.kind, config.params);
            model->fit(Xtr, ys.transform_vector(train.targets));
            const VectorXd pred = ys.inverse_transform_vector(model->predict(Xte));
            for (Eigen::Index i = 0; i < test.rows.rows(); ++i)
                pooled.push_back({test.dates[static_cast<std::size_t>(i)], hour,
                                  test.targets[i], pred[i]});
            art.model = model_document(*model, {{"target_scaler", ys.to_json()},
                                                {"feature_scaler", xs.to_json()},
                                                {"target_hour", hour}});
        } else {
            const int nf = static_cast<int>(Xtr.cols());
            std::unique_ptr<OnlineRegressor> learner;
            if (config.kind == "boxcox_linear") {
                learner = make_online_regressor(config.kind, nf, config.params);
            } else {
                // non box-cox learners work on min-max scaled targets
                auto inner = make_online_regressor(config.kind, nf, config.params);
                learner = std::make_unique<ScaledTargetOnline>(
                    std::move(inner), MinMaxScaler::fit_vector(train.targets));
            }
            FeatureMatrix pre = train, stream = test;
            pre.rows = Xtr;
            stream.rows = Xte;
            const auto prog = progressive_validation(*learner, pre, stream);
            for (Eigen::Index i = 0; i < test.rows.rows(); ++i)
                pooled.push_back({test.dates[static_cast<std::size_t>(i)], hour,
                                  test.targets[i],
                                  prog.predictions[static_cast<std::size_t>(i)]});
            auto doc = online_document(*learner);
            doc["extra"] = {{"feature_scaler", xs.to_json()}, {"target_hour", hour}};
            art.model = std::move(doc);
        }
        result.hours.push_back(std::move(art));
    }

    std::sort(pooled.begin(), pooled.end(), [](const PooledStep& a, const PooledStep& b) {
        if (a.date != b.date) return a.date < b.date;
        return a.hour < b.hour;
    });

    std::vector<double> clean_actual, clean_pred;
    for (const auto& step : pooled) {
        result.dates.push_back(step.date);
        result.pooled_hours.push_back(step.hour);
        result.actuals.push_back(step.actual);
        result.predictions.push_back(step.prediction);
        result.residuals.push_back(step.actual - step.prediction);
        if (std::isfinite(step.prediction)) {
            clean_actual.push_back(step.actual);
            clean_pred.push_back(step.prediction);
        }
    }
    if (clean_actual.size() >= 2)
        result.metrics = compute_metrics(from_std(clean_actual), from_std(clean_pred));
    return result;
}

DriftBenchmark run_drift_benchmark(std::uint64_t seed) {
    SynthParams sp;
    sp.start = parse_date("2015-01-01");
    sp.n_days = 3 * 365;
    sp.drift_per_year_mwh = 8000.0;
    sp.seed = seed;
    const auto series = synth_demand(sp);
    const auto seasons = default_season_table();

    PipelineConfig offline;
    offline.online = false;
    offline.kind = "extra_trees";
    offline.params = {{"n_estimators", 32}, {"seed", seed}};
    offline.lag_days = {1, 7};
    offline.lag_window = 1;
    offline.boundary = parse_date("2017-01-01");

    PipelineConfig online = offline;
    online.online = true;
    online.kind = "boxcox_linear";
    online.params = {{"lambda", 0.1}, {"eta", 0.05}};

    DriftBenchmark bench;
    bench.offline_mae = per_hour_orchestrate(series, seasons, offline).metrics.mae;
    bench.online_mae = per_hour_orchestrate(series, seasons, online).metrics.mae;
    return bench;
}

}  // namespace gridcast
