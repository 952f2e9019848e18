#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "gridcast/online.hpp"

using namespace gridcast;

namespace {

std::string error_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

VectorXd vec1(double v) { return VectorXd::Constant(1, v); }

FeatureMatrix matrix_of(const std::vector<double>& xs, const std::vector<double>& ys) {
    FeatureMatrix m;
    m.rows.resize(static_cast<Eigen::Index>(xs.size()), 1);
    m.targets.resize(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        m.rows(static_cast<Eigen::Index>(i), 0) = xs[i];
        m.targets[static_cast<Eigen::Index>(i)] = ys[i];
    }
    return m;
}

}  // namespace

TEST_CASE("online linear: exact prediction leaves weights untouched") {
    OnlineLinear lin(1, 0.5);
    lin.learn_one(vec1(1.0), 0.0);  // w=0, b=0 predicts 0 exactly
    CHECK(lin.weights()[0] == 0.0);
    CHECK(lin.intercept() == 0.0);
    CHECK(lin.updates_seen() == 1);
}

TEST_CASE("online linear: single hand-checked step") {
    OnlineLinear lin(1, 0.5);
    lin.learn_one(vec1(1.0), 1.0);
    CHECK(lin.weights()[0] == 0.5);
    CHECK(lin.intercept() == 0.5);
}

TEST_CASE("online linear: 500 noiseless steps recover y = 3x + 1") {
    OnlineLinear lin(1, 0.05);
    Rng rng(1);
    for (int t = 0; t < 500; ++t) {
        const double x = rng.uniform(-1, 1);
        lin.learn_one(vec1(x), 3.0 * x + 1.0);
    }
    CHECK(std::abs(lin.weights()[0] - 3.0) < 0.05);
    CHECK(std::abs(lin.intercept() - 1.0) < 0.05);
    CHECK(lin.updates_seen() == 500);
}

TEST_CASE("online linear: divergence is reported, not silently propagated") {
    OnlineLinear lin(1, 10.0);  // grossly unstable step for |x| >> 1
    CHECK(error_code([&] {
              for (int t = 0; t < 200; ++t) lin.learn_one(vec1(100.0), 1.0);
          }) == "NonFiniteUpdate");
}

TEST_CASE("pa: within-epsilon predictions take the passive branch bit-exactly") {
    PassiveAggressive pa(2, 1.0, 0.5);
    VectorXd x(2);
    x << 0.3, -0.7;
    pa.learn_one(x, 2.0);  // sets some state
    const auto before = pa.state_json();
    const double pred = pa.predict_one(x);
    pa.learn_one(x, pred + 0.4);  // inside the 0.5 tube
    auto after = pa.state_json();
    after["updates_seen"] = before.at("updates_seen");
    CHECK(before == after);
    CHECK(pa.updates_seen() == 2);
}

TEST_CASE("pa: hand-checked aggressive update lands on the target") {
    PassiveAggressive pa(1, 10.0, 0.0, /*fit_intercept=*/false);
    pa.learn_one(vec1(1.0), 2.0);
    CHECK(pa.weights()[0] == 2.0);
    CHECK(pa.intercept() == 0.0);
    CHECK(pa.predict_one(vec1(1.0)) == 2.0);
}

TEST_CASE("pa: 200-point stream recovers the slope of y = 2x") {
    PassiveAggressive pa(1, 2.0, 0.01);
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        const double x = rng.uniform(0.2, 1.0);
        pa.learn_one(vec1(x), 2.0 * x);
    }
    CHECK(std::abs(pa.weights()[0] - 2.0) < 0.05);
}

TEST_CASE("pa: per-update weight change is bounded by C * norm of the extended input") {
    PassiveAggressive pa(2, 0.7, 0.0, true);
    Rng rng(3);
    for (int t = 0; t < 300; ++t) {
        VectorXd x(2);
        x << rng.uniform(-2, 2), rng.uniform(-2, 2);
        const VectorXd w_before = pa.weights();
        const double b_before = pa.intercept();
        pa.learn_one(x, rng.uniform(-5, 5));
        VectorXd dw(3);
        dw << pa.weights() - w_before, pa.intercept() - b_before;
        const double ext_norm = std::sqrt(x.squaredNorm() + 1.0);
        CHECK(dw.norm() <= 0.7 * ext_norm + 1e-12);
    }
}

TEST_CASE("pa: zero-norm input with loss and no intercept is skipped") {
    PassiveAggressive pa(1, 1.0, 0.0, /*fit_intercept=*/false);
    pa.learn_one(vec1(0.0), 5.0);
    CHECK(pa.skipped_updates() == 1);
    CHECK(pa.weights()[0] == 0.0);
    CHECK(pa.updates_seen() == 1);
}

TEST_CASE("box-cox: transform branches and exactness") {
    CHECK(boxcox_transform(10.0, 1.0) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(boxcox_transform(std::exp(1.0), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(error_code([] { boxcox_transform(0.0, 0.1); }) == "NonPositiveTarget");
    CHECK(error_code([] { boxcox_transform(-3.0, 0.0); }) == "NonPositiveTarget");

    const double y = 37412.0;
    const double z = boxcox_transform(y, 0.1);
    CHECK(std::abs(boxcox_inverse(z, 0.1) - y) / y < 1e-9);
}

TEST_CASE("box-cox: round trip across the power grid on y in [1, 1e6]") {
    for (double lambda : {1.0, 0.1, 0.05, 0.01, 0.0}) {
        for (double y : {1.0, 2.5, 100.0, 30000.0, 999999.0, 1e6}) {
            const double back = boxcox_inverse(boxcox_transform(y, lambda), lambda);
            INFO("lambda=", lambda, " y=", y);
            CHECK(std::abs(back - y) <= 1e-9 * y);
        }
    }
}

TEST_CASE("box-cox learner: lambda 1 is online linear on shifted targets") {
    BoxCoxOnline bc(1, 1.0, 0.05);
    OnlineLinear lin(1, 0.05);
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
        const double x = rng.uniform(0, 1);
        const double y = 4.0 + 2.0 * x;
        bc.learn_one(vec1(x), y);
        lin.learn_one(vec1(x), y - 1.0);
        CHECK(bc.predict_one(vec1(x)) == lin.predict_one(vec1(x)) + 1.0);
    }
}

TEST_CASE("box-cox learner: constant 30000 MWh stream converges within 1%") {
    BoxCoxOnline bc(1, 0.1, 0.05);
    for (int t = 0; t < 200; ++t) bc.learn_one(vec1(1.0), 30000.0);
    CHECK(std::abs(bc.predict_one(vec1(1.0)) - 30000.0) / 30000.0 < 0.01);
}

TEST_CASE("box-cox learner: out-of-domain inverse is clamped and counted") {
    BoxCoxOnline bc(1, 0.1, 0.01);
    nlohmann::json state = bc.state_json();
    state["inner"]["weights"] = std::vector<double>{-30.0};  // z = -30 at x = 1
    bc.load_state(state);
    const double p = bc.predict_one(vec1(1.0));
    CHECK(std::isfinite(p));
    CHECK(p >= 0.0);
    CHECK(bc.clamped_predictions() == 1);
}

TEST_CASE("online mlp: zero learning rate leaves the network unchanged") {
    MlpParams p;
    p.hidden_sizes = {4};
    p.learning_rate = 0.0;
    p.seed = 5;
    OnlineMlp mlp(2, p);
    VectorXd x(2);
    x << 0.3, 0.4;
    const double before = mlp.predict_one(x);
    mlp.learn_one(x, 100.0);
    CHECK(mlp.predict_one(x) == before);
    CHECK(mlp.updates_seen() == 1);
}

TEST_CASE("online mlp: 500 steps on one example drive its error below 1%") {
    MlpParams p;
    p.hidden_sizes = {4};
    p.activation = "tanh";
    p.learning_rate = 0.05;
    p.l2_alpha = 0.0;
    p.seed = 6;
    OnlineMlp mlp(2, p);
    VectorXd x(2);
    x << 0.5, -0.2;
    const double y = 3.0;
    for (int t = 0; t < 500; ++t) mlp.learn_one(x, y);
    CHECK(std::abs(mlp.predict_one(x) - y) < 0.01 * std::abs(y));
}

TEST_CASE("progressive validation: constant stream yields zero residuals") {
    PassiveAggressive pa(1, 1e9, 0.0);
    const auto pre = matrix_of({1.0, 1.0, 1.0}, {500.0, 500.0, 500.0});
    const auto stream = matrix_of({1.0, 1.0, 1.0, 1.0}, {500.0, 500.0, 500.0, 500.0});
    const auto res = progressive_validation(pa, pre, stream);
    REQUIRE(res.residuals.size() == 4);
    for (double r : res.residuals) CHECK(r == 0.0);
    CHECK(res.mae == 0.0);
    CHECK(res.missing == 0);
}

TEST_CASE("progressive validation: the jump residual shows predict-before-learn") {
    // step from 100 to 200 at index 2; predicting first means the learner
    // has not yet seen the new level, so the residual at the jump is the
    // full step, strictly larger than a learn-first evaluation would show
    const auto pre = matrix_of({1.0, 1.0}, {100.0, 100.0});
    const auto stream = matrix_of({1.0, 1.0, 1.0, 1.0}, {100.0, 100.0, 200.0, 200.0});

    PassiveAggressive pa(1, 1e9, 0.0);
    const auto res = progressive_validation(pa, pre, stream);
    const double predict_first_jump = std::abs(res.residuals[2]);

    // learn-first replay of the same stream
    PassiveAggressive cheat(1, 1e9, 0.0);
    for (Eigen::Index i = 0; i < pre.rows.rows(); ++i)
        cheat.learn_one(pre.rows.row(i), pre.targets[i]);
    double learn_first_jump = 0.0;
    for (Eigen::Index i = 0; i < stream.rows.rows(); ++i) {
        cheat.learn_one(stream.rows.row(i), stream.targets[i]);
        const double r = std::abs(stream.targets[i] - cheat.predict_one(stream.rows.row(i)));
        if (i == 2) learn_first_jump = r;
    }
    CHECK(predict_first_jump == 100.0);
    CHECK(predict_first_jump > learn_first_jump);
}

TEST_CASE("progressive validation: a failing step is recorded, not fatal") {
    BoxCoxOnline bc(1, 0.1, 0.05);
    const auto pre = matrix_of({1.0}, {100.0});
    const auto stream = matrix_of({1.0, 1.0, 1.0}, {100.0, -5.0, 100.0});
    const auto res = progressive_validation(bc, pre, stream);
    CHECK(res.missing == 1);
    CHECK(res.step_errors[1] == "NonPositiveTarget");
    CHECK(std::isnan(res.residuals[1]));
    CHECK(res.step_errors[0].empty());
    CHECK(res.step_errors[2].empty());
}

TEST_CASE("checkpoint: resume and replay reproduces residuals bit-exactly") {
    const auto pre = matrix_of({0.1, 0.5, 0.9}, {100.0, 140.0, 180.0});
    std::vector<double> xs, ys;
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        xs.push_back(rng.uniform(0, 1));
        ys.push_back(100.0 + 100.0 * xs.back() + rng.normal());
    }
    const auto stream = matrix_of(xs, ys);

    for (const std::string kind :
         {"online_linear", "passive_aggressive", "boxcox_linear", "online_mlp"}) {
        auto a = make_online_regressor(kind, 1, {{"hidden_sizes", {3}}});
        for (Eigen::Index i = 0; i < pre.rows.rows(); ++i)
            a->learn_one(pre.rows.row(i), pre.targets[i]);
        const auto checkpoint = online_document(*a);
        auto b = online_from_document(checkpoint);
        CHECK(b->updates_seen() == a->updates_seen());

        const auto empty = matrix_of({}, {});
        const auto ra = progressive_validation(*a, empty, stream);
        const auto rb = progressive_validation(*b, empty, stream);
        for (std::size_t i = 0; i < ra.residuals.size(); ++i) {
            INFO(kind);
            CHECK(ra.residuals[i] == rb.residuals[i]);
        }
    }
}

TEST_CASE("scaled-target adapter: raw units outside, scaled units inside") {
    auto scaler = MinMaxScaler::fit_vector(from_std({20000.0, 40000.0}));
    ScaledTargetOnline model(std::make_unique<OnlineLinear>(1, 0.2), scaler);
    for (int t = 0; t < 300; ++t) model.learn_one(vec1(1.0), 30000.0);
    CHECK(std::abs(model.predict_one(vec1(1.0)) - 30000.0) < 100.0);

    auto back = online_from_document(online_document(model));
    CHECK(back->predict_one(vec1(1.0)) == model.predict_one(vec1(1.0)));
    CHECK(back->updates_seen() == model.updates_seen());
}
