#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gridcast/calendar.hpp"
#include "gridcast/demand.hpp"

namespace gridcast {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Per-feature min/max learned on training rows, mapping each column
// onto [-1, 1]. Constant columns map to 0. Values outside the training
// range extrapolate linearly (no clipping).
struct MinMaxScaler {
    VectorXd mn, mx;

    static MinMaxScaler fit(const MatrixXd& X);
    static MinMaxScaler fit_vector(const VectorXd& y);

    MatrixXd transform(const MatrixXd& X) const;
    MatrixXd inverse_transform(const MatrixXd& Z) const;
    VectorXd transform_vector(const VectorXd& y) const;
    VectorXd inverse_transform_vector(const VectorXd& z) const;
    double transform_scalar(double y) const;
    double inverse_transform_scalar(double z) const;

    nlohmann::json to_json() const;
    static MinMaxScaler from_json(const nlohmann::json& j);

private:
    void check_width(Eigen::Index cols) const;
};

// Design matrix for one target hour. Targets stay in raw MWh; feature
// and target scaling are applied separately by the pipeline.
struct FeatureMatrix {
    MatrixXd rows;
    VectorXd targets;
    std::vector<std::string> feature_names;
    int target_hour = 0;
    std::vector<Date> dates;  // one per row, aligned
};

// Lag windows anchor at hour `target_hour` of day D-d, inclusive, and
// extend `lag_window` hours backwards; rows with any missing lag are
// dropped. Calendar block: month, day_of_week, day_of_month, year,
// is_holiday_or_weekend, then 7 one-hot season flags (12 scalars).
FeatureMatrix build_features(const DemandSeries& series,
                             const std::vector<CalendarFeatures>& calendar,
                             int target_hour,
                             const std::set<int>& lag_days = {1, 2, 7, 30},
                             int lag_window = 28);

std::pair<FeatureMatrix, FeatureMatrix> split_train_test(const FeatureMatrix& m,
                                                         Date boundary);

}  // namespace gridcast
