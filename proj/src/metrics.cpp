#include "gridcast/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace gridcast {

MetricReport compute_metrics(const VectorXd& actual, const VectorXd& predicted,
                             const VectorXd* naive_baseline) {
    if (actual.size() != predicted.size())
        fail("LengthMismatch", "actual " + std::to_string(actual.size()) + " vs predicted " +
                                   std::to_string(predicted.size()));
    if (actual.size() < 2) fail("LengthMismatch", "need at least 2 observations");
    if (!actual.allFinite() || !predicted.allFinite())
        fail("NonFiniteInput", "metrics require finite inputs");

    MetricReport r;
    r.n = static_cast<std::size_t>(actual.size());
    const VectorXd err = actual - predicted;
    r.mae = err.cwiseAbs().mean();
    r.mse = err.squaredNorm() / static_cast<double>(actual.size());
    r.rmse = std::sqrt(r.mse);

    const double mean = actual.mean();
    const double ss_tot = (actual.array() - mean).matrix().squaredNorm();
    if (ss_tot > 0.0)
        r.r_squared = 1.0 - err.squaredNorm() / ss_tot;

    if (naive_baseline) {
        if (naive_baseline->size() != actual.size())
            fail("LengthMismatch", "naive baseline length " +
                                       std::to_string(naive_baseline->size()));
        const double naive_mae = (actual - *naive_baseline).cwiseAbs().mean();
        if (naive_mae == 0.0) fail("ZeroNaiveError", "MASE undefined: naive MAE is 0");
        r.mase = r.mae / naive_mae;
    }
    return r;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) fail("EmptySplit", "percentile of an empty sample");
    std::sort(values.begin(), values.end());
    const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    const double frac = rank - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

ReserveReport reserve_analysis(const std::vector<double>& residuals, double max_reserve,
                               double avg_reserve) {
    if (residuals.empty()) fail("EmptySplit", "reserve analysis of an empty sample");
    ReserveReport rep;
    rep.max_reserve = max_reserve;
    rep.avg_reserve = avg_reserve;
    std::size_t within_max = 0, within_avg = 0;
    for (double r : residuals) {
        if (std::abs(r) <= max_reserve) ++within_max;
        if (std::abs(r) <= avg_reserve) ++within_avg;
    }
    const auto n = static_cast<double>(residuals.size());
    rep.frac_within_max = static_cast<double>(within_max) / n;
    rep.frac_within_avg = static_cast<double>(within_avg) / n;
    rep.p5 = percentile(residuals, 5.0);
    rep.p95 = percentile(residuals, 95.0);
    return rep;
}

}  // namespace gridcast
