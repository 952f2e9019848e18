#include "gridcast/grid_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace gridcast {

std::vector<nlohmann::json> HyperparamGrid::combinations() const {
    std::vector<nlohmann::json> combos = {nlohmann::json::object()};
    for (const auto& [name, candidates] : values) {
        if (candidates.empty()) fail("EmptyGrid", "no candidates for '" + name + "'");
        std::vector<nlohmann::json> next;
        next.reserve(combos.size() * candidates.size());
        for (const auto& combo : combos)
            for (const auto& v : candidates) {
                auto c = combo;
                c[name] = v;
                next.push_back(std::move(c));
            }
        combos = std::move(next);
    }
    return combos;
}

namespace {

struct Fold {
    std::vector<Eigen::Index> train, test;
};

std::vector<Fold> make_folds(Eigen::Index n, int n_splits, CvMode mode, std::uint64_t seed) {
    if (n_splits < 1) fail("InvalidArgument", "n_splits >= 1");
    std::vector<Fold> folds;
    if (mode == CvMode::random) {
        Rng rng(seed);
        const auto n_test = std::max<Eigen::Index>(1, n / 5);
        for (int s = 0; s < n_splits; ++s) {
            auto perm = rng.permutation(static_cast<std::size_t>(n));
            Fold f;
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto row = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
                (i < n_test ? f.test : f.train).push_back(row);
            }
            folds.push_back(std::move(f));
        }
    } else {
        // expanding window over n_splits+1 contiguous blocks in row order
        const Eigen::Index blocks = n_splits + 1;
        if (n < blocks * 2) fail("EmptySplit", "too few rows for expanding-window folds");
        for (int s = 0; s < n_splits; ++s) {
            const Eigen::Index train_end = n * (s + 1) / blocks;
            const Eigen::Index test_end = n * (s + 2) / blocks;
            Fold f;
            for (Eigen::Index i = 0; i < train_end; ++i) f.train.push_back(i);
            for (Eigen::Index i = train_end; i < test_end; ++i) f.test.push_back(i);
            folds.push_back(std::move(f));
        }
    }
    for (const auto& f : folds)
        if (f.train.empty() || f.test.empty()) fail("EmptySplit", "degenerate CV fold");
    return folds;
}

MatrixXd take_rows(const MatrixXd& X, const std::vector<Eigen::Index>& rows) {
    MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
    return out;
}

VectorXd take(const VectorXd& y, const std::vector<Eigen::Index>& rows) {
    VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = y[rows[i]];
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

GridSearchReport grid_search(const std::string& kind, const HyperparamGrid& grid,
                             const FeatureMatrix& matrix, int n_splits, CvMode mode,
                             std::uint64_t seed) {
    GridSearchReport report;
    report.kind = kind;
    report.mode = mode;

    const auto folds = make_folds(matrix.rows.rows(), n_splits, mode, seed);
    for (const auto& params : grid.combinations()) {
        GridRow row;
        row.params = params;
        std::vector<double> maes;
        double mse_sum = 0.0, rmse_sum = 0.0, fit_sum = 0.0, score_sum = 0.0;
        double r2_sum = 0.0;
        int r2_count = 0;
        try {
            for (const auto& fold : folds) {
                const MatrixXd Xtr_raw = take_rows(matrix.rows, fold.train);
                const MatrixXd Xte_raw = take_rows(matrix.rows, fold.test);
                const VectorXd ytr_raw = take(matrix.targets, fold.train);
                const VectorXd yte = take(matrix.targets, fold.test);

                const auto xs = MinMaxScaler::fit(Xtr_raw);
                const auto ys = MinMaxScaler::fit_vector(ytr_raw);

                auto model = make_regressor(kind, params);
                const auto t_fit = std::chrono::steady_clock::now();
                model->fit(xs.transform(Xtr_raw), ys.transform_vector(ytr_raw));
                const double fit_time = seconds_since(t_fit);

                const auto t_score = std::chrono::steady_clock::now();
                const VectorXd pred =
                    ys.inverse_transform_vector(model->predict(xs.transform(Xte_raw)));
                const double score_time = seconds_since(t_score);

                auto m = compute_metrics(yte, pred);
                m.fit_time = fit_time;
                m.score_time = score_time;
                maes.push_back(m.mae);
                mse_sum += m.mse;
                rmse_sum += m.rmse;
                fit_sum += m.fit_time;
                score_sum += m.score_time;
                if (m.r_squared) {
                    r2_sum += *m.r_squared;
                    ++r2_count;
                }
            }
        } catch (const Error& e) {
            row.failed = true;
            row.error = e.code();
            report.rows.push_back(std::move(row));
            continue;
        }
        const auto k = static_cast<double>(maes.size());
        row.folds = static_cast<int>(maes.size());
        for (double m : maes) row.mean_mae += m;
        row.mean_mae /= k;
        for (double m : maes) row.sd_mae += (m - row.mean_mae) * (m - row.mean_mae);
        row.sd_mae = maes.size() > 1 ? std::sqrt(row.sd_mae / (k - 1.0)) : 0.0;
        row.mean_mse = mse_sum / k;
        row.mean_rmse = rmse_sum / k;
        row.mean_fit_time = fit_sum / k;
        row.mean_score_time = score_sum / k;
        if (r2_count > 0) row.mean_r2 = r2_sum / r2_count;
        report.rows.push_back(std::move(row));
    }

    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const GridRow& a, const GridRow& b) {
                         if (a.failed != b.failed) return !a.failed;
                         if (a.failed) return false;
                         if (a.mean_mae != b.mean_mae) return a.mean_mae < b.mean_mae;
                         return a.mean_fit_time < b.mean_fit_time;
                     });
    return report;
}

std::string GridSearchReport::table(char delim) const {
    std::ostringstream out;
    out << "estimator" << delim << "params" << delim << "mean_fit_time" << delim
        << "mean_score_time" << delim << "mean_mse" << delim << "mean_rmse" << delim
        << "mean_mae" << delim << "mean_r2" << "\n";
    for (const auto& row : rows) {
        out << kind << delim << row.params.dump() << delim;
        if (row.failed) {
            out << "failed:" << row.error << delim << "" << delim << "" << delim << ""
                << delim << "" << delim << "" << "\n";
            continue;
        }
        out << row.mean_fit_time << delim << row.mean_score_time << delim << row.mean_mse
            << delim << row.mean_rmse << delim << row.mean_mae << delim;
        if (row.mean_r2)
            out << *row.mean_r2;
        else
            out << "n/a";
        out << "\n";
    }
    return out.str();
}

}  // namespace gridcast
