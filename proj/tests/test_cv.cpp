#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "gaze3d/cross_validation.hpp"
#include "gaze3d/errors.hpp"
#include "gaze3d/rng.hpp"
#include "helpers.hpp"

using namespace gaze3d;

TEST_CASE("folds partition the samples evenly") {
    const auto fold = make_folds(100, 5, 7);
    REQUIRE(fold.size() == 100);
    std::array<int, 5> counts{};
    for (int f : fold) {
        REQUIRE(f >= 0);
        REQUIRE(f < 5);
        counts[f] += 1;
    }
    for (int c : counts) CHECK(c == 20);
}

TEST_CASE("fold assignment is deterministic in the seed") {
    CHECK(make_folds(57, 4, 11) == make_folds(57, 4, 11));
    CHECK(make_folds(57, 4, 11) != make_folds(57, 4, 12));
}

TEST_CASE("guards: k >= 2 and n >= k") {
    CHECK_THROWS_AS(make_folds(10, 1, 0), ConfigInvalid);
    CHECK_THROWS_AS(make_folds(3, 5, 0), TooFewSamples);
}

TEST_CASE("a perfectly identifiable model scores R2 = 1") {
    Matrix X(60, 1);
    std::vector<double> y(60);
    for (int i = 0; i < 60; ++i) {
        X(i, 0) = 0.3 * i;
        y[i] = 4.0 * X(i, 0) + 1.0;
    }
    const CvReport rep = cross_validate(
        [](const Matrix& Xtr, std::span<const double> ytr) {
            return fit_model(ModelKind::LR, Xtr, ytr);
        },
        X, y, 5, 3, "LR");
    CHECK(rep.mean.r2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.mean.mae == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(rep.folds.size() == 5);
}

TEST_CASE("shuffled labels destroy the linear fit") {
    Rng data_rng(17);
    const Matrix X = test::random_matrix(120, 3, data_rng);
    std::vector<double> y(120);
    for (int i = 0; i < 120; ++i) y[i] = X(i, 0) + X(i, 1);

    double worst = -1e300;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::vector<double> shuffled = y;
        Rng rng(seed * 97 + 5);
        for (std::size_t i = 0; i < shuffled.size(); ++i) {
            std::swap(shuffled[i], shuffled[i + rng.below(shuffled.size() - i)]);
        }
        const CvReport rep = cross_validate(
            [](const Matrix& Xtr, std::span<const double> ytr) {
                return fit_model(ModelKind::LR, Xtr, ytr);
            },
            X, shuffled, 5, seed, "LR");
        worst = std::max(worst, rep.mean.r2);
    }
    CHECK(worst <= 0.1);
}

TEST_CASE("CvReport CSV layout") {
    CvReport rep;
    rep.model_name = "LR";
    rep.k = 2;
    rep.folds = {{0.1, 0.2, 0.9}, {0.2, 0.3, 0.8}};
    rep.mean = {0.15, 0.25, 0.85};
    const std::string csv = rep.to_csv();
    CHECK(csv.find("model,fold,mae,mse,r2\n") == 0);
    CHECK(csv.find("LR,mean,0.15,0.25,0.85\n") != std::string::npos);
}
