#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gridcast/common.hpp"

namespace gridcast {

using Eigen::VectorXd;

// Forecast-error report in original demand units. r_squared is absent
// when the actuals have zero variance (undefined, never reported as 0);
// mase is present only when a naive baseline was supplied.
struct MetricReport {
    double mae = 0.0;   // MWh
    double mse = 0.0;   // MWh^2
    double rmse = 0.0;  // MWh
    std::optional<double> r_squared;
    std::optional<double> mase;
    double fit_time = 0.0;    // seconds, wall clock
    double score_time = 0.0;  // seconds, wall clock
    std::size_t n = 0;
};

MetricReport compute_metrics(const VectorXd& actual, const VectorXd& predicted,
                             const VectorXd* naive_baseline = nullptr);

struct ReserveReport {
    double frac_within_max = 0.0;
    double frac_within_avg = 0.0;
    double p5 = 0.0;   // MWh
    double p95 = 0.0;  // MWh
    double max_reserve = 0.0;
    double avg_reserve = 0.0;
};

// Fraction of |residuals| within each tendered-reserve threshold, plus
// 5th/95th residual percentiles (linear interpolation between ranks).
ReserveReport reserve_analysis(const std::vector<double>& residuals,
                               double max_reserve = 6000.0, double avg_reserve = 2000.0);

// linear-interpolation percentile on a copy of the data, p in [0, 100]
double percentile(std::vector<double> values, double p);

}  // namespace gridcast
