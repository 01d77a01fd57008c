#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "gaze3d/errors.hpp"
#include "gaze3d/gbr.hpp"
#include "gaze3d/linear_models.hpp"
#include "gaze3d/regressor.hpp"
#include "gaze3d/rng.hpp"
#include "gaze3d/trees.hpp"
#include "helpers.hpp"

using namespace gaze3d;

TEST_CASE("OLS recovers an exact linear law") {
    Matrix X(100, 1);
    std::vector<double> y(100);
    for (int i = 0; i < 100; ++i) {
        X(i, 0) = 0.1 * i - 3.0;
        y[i] = 3.0 * X(i, 0);
    }
    const LinModel m = lr_fit(X, y);
    CHECK(m.coef[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(m.intercept == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK_FALSE(m.used_fallback);
}

TEST_CASE("singular designs throw without the ridge fallback, solve with it") {
    Matrix X(10, 2);
    std::vector<double> y(10);
    for (int i = 0; i < 10; ++i) {
        X(i, 0) = i;
        X(i, 1) = 2.0 * i;  // collinear column
        y[i] = i;
    }
    LinConfig strict;
    strict.ridge_fallback = false;
    CHECK_THROWS_AS(lr_fit(X, y, strict), SingularDesign);
    const LinModel m = lr_fit(X, y);
    CHECK(m.used_fallback);
    CHECK(m.predict(X.row(4)) == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("underdetermined systems engage the fallback") {
    Rng rng(2);
    const Matrix X = test::random_matrix(3, 5, rng);
    std::vector<double> y{1.0, 2.0, 3.0};
    const LinModel m = lr_fit(X, y);
    CHECK(m.used_fallback);
}

TEST_CASE("Bayesian ridge tracks OLS on well-determined noisy data") {
    Rng rng(3);
    const Matrix X = test::random_matrix(200, 3, rng);
    std::vector<double> y(200);
    for (int i = 0; i < 200; ++i) {
        y[i] = 1.5 * X(i, 0) - 2.0 * X(i, 1) + 0.5 * X(i, 2) + 0.05 * rng.gaussian();
    }
    const LinModel ols = lr_fit(X, y);
    const BrModel br = br_fit(X, y);
    CHECK(br.n_iter <= 300);
    for (int j = 0; j < 3; ++j) {
        CHECK(br.coef[j] == doctest::Approx(ols.coef[j]).epsilon(1e-2));
    }
    CHECK(br.alpha > 0.0);
    CHECK(br.lambda > 0.0);
}

TEST_CASE("elastic net: zero target gives zero coefficients") {
    Rng rng(4);
    const Matrix X = test::random_matrix(40, 4, rng);
    const std::vector<double> y(40, 0.0);
    const EnetModel m = enet_fit(X, y);
    for (double c : m.coef) CHECK(c == 0.0);
    CHECK(m.intercept == 0.0);
}

TEST_CASE("elastic net objective is nonincreasing per sweep") {
    Rng rng(5);
    const Matrix X = test::random_matrix(60, 5, rng);
    std::vector<double> y(60);
    for (int i = 0; i < 60; ++i) y[i] = 2.0 * X(i, 0) - X(i, 3) + 0.1 * rng.gaussian();
    const EnetModel m = enet_fit(X, y);
    REQUIRE(m.objective_per_sweep.size() >= 2);
    for (std::size_t k = 1; k < m.objective_per_sweep.size(); ++k) {
        CHECK(m.objective_per_sweep[k] <= m.objective_per_sweep[k - 1] + 1e-12);
    }
}

TEST_CASE("elastic net with l1_ratio 0 matches the ridge closed form") {
    // on the internally standardized data the stationary point solves
    // (Z'Z/n + alpha I) w = Z'y/n; compare in original units
    Rng rng(6);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix X = test::random_matrix(10, 3, rng, 2.0);
        std::vector<double> y(10);
        for (int i = 0; i < 10; ++i) y[i] = rng.gaussian();

        EnetConfig cfg;
        cfg.l1_ratio = 0.0;
        cfg.alpha = 1.0;
        cfg.tol = 1e-12;
        cfg.max_iter = 20000;
        const EnetModel m = enet_fit(X, y, cfg);

        // oracle: standardize exactly like the model does, solve in closed form
        const std::size_t n = X.rows, d = X.cols;
        Eigen::MatrixXd Z(n, d);
        Eigen::VectorXd yc(n);
        std::vector<double> mean(d), scale(d);
        for (std::size_t j = 0; j < d; ++j) {
            double mu = 0;
            for (std::size_t i = 0; i < n; ++i) mu += X(i, j);
            mu /= n;
            double var = 0;
            for (std::size_t i = 0; i < n; ++i) var += (X(i, j) - mu) * (X(i, j) - mu);
            var /= n;
            mean[j] = mu;
            scale[j] = std::sqrt(var);
        }
        double ym = 0;
        for (double v : y) ym += v;
        ym /= n;
        for (std::size_t i = 0; i < n; ++i) {
            yc(i) = y[i] - ym;
            for (std::size_t j = 0; j < d; ++j) Z(i, j) = (X(i, j) - mean[j]) / scale[j];
        }
        Eigen::MatrixXd A = Z.transpose() * Z / double(n);
        A.diagonal().array() += cfg.alpha;
        const Eigen::VectorXd w = A.ldlt().solve(Z.transpose() * yc / double(n));
        for (std::size_t j = 0; j < d; ++j) {
            CHECK(m.coef[j] == doctest::Approx(w(j) / scale[j]).epsilon(1e-6));
        }
    }
}

TEST_CASE("GBR fits a smooth curve with default settings") {
    Matrix X(200, 1);
    std::vector<double> y(200);
    for (int i = 0; i < 200; ++i) {
        X(i, 0) = -1.0 + 2.0 * i / 199.0;
        y[i] = X(i, 0) * X(i, 0);
    }
    const GbrModel m = gbr_fit(X, y);
    double ss_res = 0.0, ss_tot = 0.0, mean = 0.0;
    for (double v : y) mean += v;
    mean /= y.size();
    for (int i = 0; i < 200; ++i) {
        const double e = y[i] - m.predict(X.row(i));
        ss_res += e * e;
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    CHECK(1.0 - ss_res / ss_tot >= 0.99);
}

TEST_CASE("GBR training error is nonincreasing in the number of trees") {
    Rng rng(7);
    const Matrix X = test::random_matrix(80, 2, rng);
    std::vector<double> y(80);
    for (int i = 0; i < 80; ++i) y[i] = std::sin(X(i, 0)) + 0.2 * X(i, 1);
    const GbrModel m = gbr_fit(X, y);
    double prev = 1e300;
    for (int t = 0; t <= m.config.n_trees; t += 10) {
        double mse = 0.0;
        for (std::size_t i = 0; i < X.rows; ++i) {
            const double e = y[i] - m.predict_staged(X.row(i), t);
            mse += e * e;
        }
        CHECK(mse <= prev + 1e-9);
        prev = mse;
    }
}

TEST_CASE("replaying five boosting rounds by hand reproduces gbr_fit") {
    Rng rng(8);
    const Matrix X = test::random_matrix(10, 2, rng);
    std::vector<double> y(10);
    for (int i = 0; i < 10; ++i) y[i] = X(i, 0) + 0.5 * X(i, 1) * X(i, 1);

    GbrConfig cfg;
    cfg.n_trees = 5;
    const GbrModel m = gbr_fit(X, y, cfg);

    // residual-fitting oracle: maintain residuals manually, fit plain trees
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= y.size();
    std::vector<double> resid(y);
    for (auto& r : resid) r -= mean;
    std::vector<RegressionTree> trees;
    const TreeConfig tc{cfg.max_depth, cfg.min_samples_leaf, 0};
    for (int t = 0; t < 5; ++t) {
        RegressionTree tree;
        tree.fit(X, resid, {}, tc);
        for (std::size_t i = 0; i < X.rows; ++i) {
            resid[i] -= cfg.learning_rate * tree.predict(X.row(i));
        }
        trees.push_back(std::move(tree));
    }
    for (std::size_t i = 0; i < X.rows; ++i) {
        double expect = mean;
        for (const auto& t : trees) expect += cfg.learning_rate * t.predict(X.row(i));
        CHECK(m.predict(X.row(i)) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("truncated staged prediction equals refitting with fewer trees") {
    Rng rng(9);
    const Matrix X = test::random_matrix(50, 3, rng);
    std::vector<double> y(50);
    for (int i = 0; i < 50; ++i) y[i] = X(i, 0) * X(i, 1) + X(i, 2);
    GbrConfig full;
    full.n_trees = 40;
    GbrConfig small = full;
    small.n_trees = 15;
    const GbrModel a = gbr_fit(X, y, full);
    const GbrModel b = gbr_fit(X, y, small);
    for (std::size_t i = 0; i < X.rows; ++i) {
        CHECK(a.predict_staged(X.row(i), 15) == b.predict(X.row(i)));
    }
}

TEST_CASE("regression tree basics: constant target and leaf minimum") {
    Matrix X(8, 1);
    std::vector<double> y(8, 2.5);
    for (int i = 0; i < 8; ++i) X(i, 0) = i;
    RegressionTree t;
    t.fit(X, y, {}, TreeConfig{});
    CHECK(t.nodes().size() == 1);  // no split improves a constant target
    CHECK(t.predict(X.row(3)) == 2.5);

    std::vector<double> y2{0, 0, 0, 0, 1, 1, 1, 1};
    RegressionTree t2;
    t2.fit(X, y2, {}, TreeConfig{3, 2, 0});
    // every leaf got at least two samples
    std::vector<int> count(t2.nodes().size(), 0);
    for (int i = 0; i < 8; ++i) {
        int cur = 0;
        while (t2.nodes()[cur].feature >= 0) {
            cur = X(i, 0) <= t2.nodes()[cur].threshold ? t2.nodes()[cur].left
                                                       : t2.nodes()[cur].right;
        }
        count[cur] += 1;
    }
    for (std::size_t k = 0; k < t2.nodes().size(); ++k) {
        if (t2.nodes()[k].feature < 0) CHECK(count[k] >= 2);
    }
}

TEST_CASE("model JSON round trips for every kind") {
    Rng rng(10);
    const Matrix X = test::random_matrix(30, 3, rng);
    std::vector<double> y(30);
    for (int i = 0; i < 30; ++i) y[i] = X(i, 0) - 2.0 * X(i, 2) + 0.1 * rng.gaussian();
    for (ModelKind kind : kAllModelKinds) {
        const AnyModel m = fit_model(kind, X, y);
        CHECK(m.kind() == kind);
        const AnyModel back = AnyModel::from_json(m.to_json());
        CHECK(back.kind() == kind);
        for (std::size_t i = 0; i < X.rows; ++i) {
            CHECK(back.predict(X.row(i)) == m.predict(X.row(i)));
        }
    }
}
