#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gridcast/ensemble.hpp"
#include "gridcast/regressor.hpp"

using namespace gridcast;

namespace {

MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    MatrixXd X(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = rng.uniform(-1, 1);
    return X;
}

// smooth nonlinear target with seeded noise
void make_wave(Eigen::Index n, std::uint64_t seed, MatrixXd* X, VectorXd* y,
               double noise = 0.1) {
    Rng rng(seed);
    X->resize(n, 2);
    y->resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        (*X)(i, 0) = rng.uniform(-2, 2);
        (*X)(i, 1) = rng.uniform(-2, 2);
        (*y)[i] = std::sin(2.0 * (*X)(i, 0)) + 0.5 * (*X)(i, 1) + noise * rng.normal();
    }
}

double mse(const VectorXd& a, const VectorXd& b) {
    return (a - b).squaredNorm() / static_cast<double>(a.size());
}

double mae(const VectorXd& a, const VectorXd& b) {
    return (a - b).cwiseAbs().mean();
}

}  // namespace

TEST_CASE("extra trees: a single tree equals fit_tree in random mode, same seed") {
    MatrixXd X;
    VectorXd y;
    make_wave(40, 21, &X, &y);

    ExtraTreesRegressor et(1, -1, {}, 7);
    et.fit(X, y);

    TreeParams tp;
    tp.split_mode = SplitMode::random;
    tp.features_per_split = -1;
    tp.seed = 7;
    DecisionTreeRegressor tree(tp);
    tree.fit(X, y);

    MatrixXd Q;
    VectorXd yq;
    make_wave(15, 99, &Q, &yq);
    const VectorXd a = et.predict(Q);
    const VectorXd b = tree.predict(Q);
    for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("ensembles: constant targets predict the constant everywhere") {
    Rng rng(22);
    MatrixXd X = random_matrix(20, 2, rng);
    VectorXd y = VectorXd::Constant(20, 3.25);
    MatrixXd Q = random_matrix(5, 2, rng);

    RandomForestRegressor rf(8, 0, {}, 1);
    rf.fit(X, y);
    ExtraTreesRegressor et(8, -1, {}, 1);
    et.fit(X, y);
    GradientBoostingRegressor gb(8, 1.0, {}, 1);
    gb.fit(X, y);
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
        CHECK(rf.predict_one(Q.row(i)) == 3.25);
        CHECK(et.predict_one(Q.row(i)) == 3.25);
        CHECK(gb.predict_one(Q.row(i)) == doctest::Approx(3.25).epsilon(1e-12));
    }
}

TEST_CASE("random forest: 32 trees beat or match 16 trees in at least 4 of 5 seeds") {
    MatrixXd Xtr, Xte;
    VectorXd ytr, yte;
    make_wave(150, 31, &Xtr, &ytr);
    make_wave(80, 32, &Xte, &yte);

    int wins = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        RandomForestRegressor rf16(16, 0, {}, seed);
        rf16.fit(Xtr, ytr);
        RandomForestRegressor rf32(32, 0, {}, seed + 100);
        rf32.fit(Xtr, ytr);
        const double m16 = mse(rf16.predict(Xte), yte);
        const double m32 = mse(rf32.predict(Xte), yte);
        if (m32 <= m16 * 1.10) ++wins;
    }
    CHECK(wins >= 4);
}

TEST_CASE("random forest: fixed seed reproduces bit-identical trees") {
    MatrixXd X;
    VectorXd y;
    make_wave(60, 41, &X, &y);
    RandomForestRegressor a(8, 0, {}, 5), b(8, 0, {}, 5);
    a.fit(X, y);
    b.fit(X, y);
    CHECK(a.state_json() == b.state_json());
}

TEST_CASE("adaboost: perfect base stops after one dominant stage") {
    // two x clusters, heavily replicated, so every resample sees both levels
    // and an unbounded tree nails the sample exactly
    MatrixXd X(24, 1);
    VectorXd y(24);
    for (int i = 0; i < 24; ++i) {
        X(i, 0) = i < 12 ? 1.0 : 2.0;
        y[i] = i < 12 ? 5.0 : -5.0;
    }
    AdaBoostRegressor ada(16, {}, 3);
    ada.fit(X, y);
    CHECK(ada.n_stages() == 1);
    CHECK_FALSE(ada.degenerate());
    CHECK(ada.predict_one(VectorXd::Constant(1, 1.0)) == 5.0);
    CHECK(ada.predict_one(VectorXd::Constant(1, 2.0)) == -5.0);
}

TEST_CASE("adaboost: one estimator equals its base tree on a replicated design") {
    MatrixXd X(24, 1);
    VectorXd y(24);
    for (int i = 0; i < 24; ++i) {
        X(i, 0) = static_cast<double>(i % 3);
        y[i] = 10.0 * (i % 3);
    }
    AdaBoostRegressor ada(1, {}, 11);
    ada.fit(X, y);
    DecisionTreeRegressor tree;
    tree.fit(X, y);
    for (int v = 0; v < 3; ++v) {
        const VectorXd q = VectorXd::Constant(1, static_cast<double>(v));
        CHECK(ada.predict_one(q) == tree.predict_one(q));
    }
}

TEST_CASE("adaboost: a hopeless first stage is flagged degenerate") {
    // stump base on a balanced two-level target: every stage's average
    // relative loss is ~1, so boosting cannot proceed
    MatrixXd X(20, 1);
    VectorXd y(20);
    for (int i = 0; i < 20; ++i) {
        X(i, 0) = i;
        y[i] = (i % 2 == 0) ? 0.0 : 1.0;
    }
    TreeParams stump;
    stump.max_depth = 0;
    AdaBoostRegressor ada(8, stump, 2);
    ada.fit(X, y);
    CHECK(ada.degenerate());
    CHECK(ada.n_stages() == 1);
}

TEST_CASE("adaboost: 16 stages reach at most the single-tree training MAE") {
    Rng rng(51);
    MatrixXd X(40, 1);
    VectorXd y(40);
    for (int i = 0; i < 40; ++i) {
        X(i, 0) = rng.uniform(0, 6.28);
        y[i] = std::sin(X(i, 0)) + 0.15 * rng.normal();
    }
    TreeParams weak;
    weak.max_depth = 3;
    AdaBoostRegressor ada(16, weak, 4);
    ada.fit(X, y);
    DecisionTreeRegressor tree(weak);
    tree.fit(X, y);
    CHECK(mae(ada.predict(X), y) <= mae(tree.predict(X), y) + 1e-12);
}

TEST_CASE("gradient boosting: one unit-rate stage equals a tree on centered targets") {
    MatrixXd X(18, 1);
    VectorXd y(18);
    for (int i = 0; i < 18; ++i) {
        X(i, 0) = static_cast<double>(i % 3);  // repeated x so leaves average
        y[i] = (i % 3) * 4.0 + (i % 2);
    }
    GradientBoostingRegressor gb(1, 1.0, {}, 0);
    gb.fit(X, y);

    DecisionTreeRegressor tree;
    const VectorXd yc = y.array() - y.mean();
    tree.fit(X, yc);
    for (int v = 0; v < 3; ++v) {
        const VectorXd q = VectorXd::Constant(1, static_cast<double>(v));
        CHECK(gb.predict_one(q) ==
              doctest::Approx(y.mean() + tree.predict_one(q)).epsilon(1e-12));
    }
}

TEST_CASE("gradient boosting: training MSE is non-increasing across 16 stages") {
    MatrixXd X;
    VectorXd y;
    make_wave(30, 61, &X, &y);
    GradientBoostingRegressor gb(16, 0.8, {}, 0);
    gb.fit(X, y);
    const auto& trace = gb.stage_train_mse();
    REQUIRE(trace.size() == 16);
    for (std::size_t m = 1; m < trace.size(); ++m)
        CHECK(trace[m] <= trace[m - 1] + 1e-12);
}

TEST_CASE("ensembles: serialization round-trips predictions bit-exactly") {
    MatrixXd X, Q;
    VectorXd y, yq;
    make_wave(50, 71, &X, &y);
    make_wave(12, 72, &Q, &yq);

    for (const std::string kind :
         {"random_forest", "extra_trees", "adaboost", "gradient_boosting"}) {
        auto model = make_regressor(kind, {{"n_estimators", 4}, {"seed", 9}});
        model->fit(X, y);
        auto back = model_from_document(model_document(*model));
        const VectorXd a = model->predict(Q);
        const VectorXd b = back->predict(Q);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            INFO(kind);
            CHECK(a[i] == b[i]);
        }
    }
}
