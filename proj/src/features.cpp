#include "gridcast/features.hpp"

#include <algorithm>

namespace gridcast {

void MinMaxScaler::check_width(Eigen::Index cols) const {
    if (cols != mn.size())
        fail("DimensionMismatch", "scaler fitted on " + std::to_string(mn.size()) +
                                      " features, got " + std::to_string(cols));
}

MinMaxScaler MinMaxScaler::fit(const MatrixXd& X) {
    if (X.rows() == 0) fail("EmptySplit", "cannot fit scaler on empty matrix");
    MinMaxScaler s;
    s.mn = X.colwise().minCoeff();
    s.mx = X.colwise().maxCoeff();
    return s;
}

MinMaxScaler MinMaxScaler::fit_vector(const VectorXd& y) {
    if (y.size() == 0) fail("EmptySplit", "cannot fit scaler on empty vector");
    MinMaxScaler s;
    s.mn = VectorXd::Constant(1, y.minCoeff());
    s.mx = VectorXd::Constant(1, y.maxCoeff());
    return s;
}

MatrixXd MinMaxScaler::transform(const MatrixXd& X) const {
    check_width(X.cols());
    MatrixXd Z(X.rows(), X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double range = mx[j] - mn[j];
        if (range == 0.0)
            Z.col(j).setZero();
        else
            Z.col(j) = 2.0 * (X.col(j).array() - mn[j]) / range - 1.0;
    }
    return Z;
}

MatrixXd MinMaxScaler::inverse_transform(const MatrixXd& Z) const {
    check_width(Z.cols());
    MatrixXd X(Z.rows(), Z.cols());
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        const double range = mx[j] - mn[j];
        if (range == 0.0)
            X.col(j).setConstant(mn[j]);
        else
            X.col(j) = (Z.col(j).array() + 1.0) * range / 2.0 + mn[j];
    }
    return X;
}

VectorXd MinMaxScaler::transform_vector(const VectorXd& y) const {
    MatrixXd m = transform(MatrixXd(y));
    return m.col(0);
}

VectorXd MinMaxScaler::inverse_transform_vector(const VectorXd& z) const {
    MatrixXd m = inverse_transform(MatrixXd(z));
    return m.col(0);
}

double MinMaxScaler::transform_scalar(double y) const {
    check_width(1);
    const double range = mx[0] - mn[0];
    return range == 0.0 ? 0.0 : 2.0 * (y - mn[0]) / range - 1.0;
}

double MinMaxScaler::inverse_transform_scalar(double z) const {
    check_width(1);
    const double range = mx[0] - mn[0];
    return range == 0.0 ? mn[0] : (z + 1.0) * range / 2.0 + mn[0];
}

nlohmann::json MinMaxScaler::to_json() const {
    return {{"min", std::vector<double>(mn.begin(), mn.end())},
            {"max", std::vector<double>(mx.begin(), mx.end())}};
}

MinMaxScaler MinMaxScaler::from_json(const nlohmann::json& j) {
    MinMaxScaler s;
    const auto lo = j.at("min").get<std::vector<double>>();
    const auto hi = j.at("max").get<std::vector<double>>();
    s.mn = Eigen::Map<const VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size()));
    s.mx = Eigen::Map<const VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()));
    return s;
}

FeatureMatrix build_features(const DemandSeries& series,
                             const std::vector<CalendarFeatures>& calendar,
                             int target_hour, const std::set<int>& lag_days,
                             int lag_window) {
    if (target_hour < 0 || target_hour > 23) fail("InvalidArgument", "target_hour");
    if (calendar.size() != series.records.size())
        fail("DimensionMismatch", "calendar not aligned with series");
    if (lag_days.empty() || lag_window < 1) fail("InvalidArgument", "lag configuration");

    const std::vector<int> lags(lag_days.begin(), lag_days.end());
    const int n_cal = 5 + kNumSeasons;
    const int n_feat = n_cal + static_cast<int>(lags.size()) * lag_window;

    std::vector<std::string> names = {"month", "day_of_week", "day_of_month", "year",
                                      "is_holiday_or_weekend"};
    for (int s = 0; s < kNumSeasons; ++s) names.push_back("season_" + std::to_string(s));
    for (int d : lags)
        for (int k = 0; k < lag_window; ++k)
            names.push_back("lag" + std::to_string(d) + "d_m" + std::to_string(k) + "h");

    std::vector<Eigen::Index> target_rows;
    for (std::size_t i = 0; i < series.records.size(); ++i) {
        if (series.hour_at(i) != target_hour) continue;
        bool complete = true;
        for (int d : lags) {
            const long anchor = static_cast<long>(i) - 24L * d;
            if (anchor - (lag_window - 1) < 0) {
                complete = false;
                break;
            }
        }
        if (complete) target_rows.push_back(static_cast<Eigen::Index>(i));
    }
    if (target_rows.empty())
        fail("SeriesTooShort", "no row has all lags available for hour " +
                                   std::to_string(target_hour));

    FeatureMatrix fm;
    fm.target_hour = target_hour;
    fm.feature_names = std::move(names);
    fm.rows.resize(static_cast<Eigen::Index>(target_rows.size()), n_feat);
    fm.targets.resize(static_cast<Eigen::Index>(target_rows.size()));
    fm.dates.reserve(target_rows.size());

    for (Eigen::Index r = 0; r < fm.rows.rows(); ++r) {
        const auto i = static_cast<std::size_t>(target_rows[r]);
        const auto& cf = calendar[i];
        Eigen::Index c = 0;
        fm.rows(r, c++) = cf.month;
        fm.rows(r, c++) = cf.day_of_week;
        fm.rows(r, c++) = cf.day_of_month;
        fm.rows(r, c++) = cf.year;
        fm.rows(r, c++) = cf.is_holiday_or_weekend ? 1.0 : 0.0;
        for (int s = 0; s < kNumSeasons; ++s) fm.rows(r, c++) = cf.season == s ? 1.0 : 0.0;
        for (int d : lags) {
            const long anchor = static_cast<long>(i) - 24L * d;
            for (int k = 0; k < lag_window; ++k)
                fm.rows(r, c++) = series.records[anchor - k].demand_mwh;
        }
        fm.targets[r] = series.records[i].demand_mwh;
        fm.dates.push_back(series.date_at(i));
    }
    return fm;
}

std::pair<FeatureMatrix, FeatureMatrix> split_train_test(const FeatureMatrix& m,
                                                         Date boundary) {
    std::vector<Eigen::Index> train_idx, test_idx;
    for (std::size_t i = 0; i < m.dates.size(); ++i) {
        (m.dates[i] < boundary ? train_idx : test_idx).push_back(static_cast<Eigen::Index>(i));
    }
    if (train_idx.empty() || test_idx.empty())
        fail("EmptySplit", "boundary " + format_date(boundary) + " leaves " +
                               std::to_string(train_idx.size()) + "/" +
                               std::to_string(test_idx.size()) + " rows");
    auto take = [&m](const std::vector<Eigen::Index>& idx) {
        FeatureMatrix out;
        out.feature_names = m.feature_names;
        out.target_hour = m.target_hour;
        out.rows.resize(static_cast<Eigen::Index>(idx.size()), m.rows.cols());
        out.targets.resize(static_cast<Eigen::Index>(idx.size()));
        out.dates.reserve(idx.size());
        for (Eigen::Index r = 0; r < out.rows.rows(); ++r) {
            out.rows.row(r) = m.rows.row(idx[r]);
            out.targets[r] = m.targets[idx[r]];
            out.dates.push_back(m.dates[idx[r]]);
        }
        return out;
    };
    return {take(train_idx), take(test_idx)};
}

}  // namespace gridcast
