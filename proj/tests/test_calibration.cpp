#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "gaze3d/calibration.hpp"
#include "gaze3d/errors.hpp"
#include "gaze3d/rng.hpp"

using namespace gaze3d;

namespace {

// raw gaze at the nine grid markers, truth generated by a forward warp of
// the raw coordinate (so a second-order fit can represent it exactly)
std::vector<CalibrationPair> grid_pairs(const std::function<Vec2(Vec2)>& warp) {
    std::vector<CalibrationPair> pairs;
    for (double y : {-15.5, 0.0, 15.5}) {
        for (double x : {-27.0, 0.0, 27.0}) {
            const Vec2 raw{x, y};
            pairs.push_back({raw, warp(raw)});
        }
    }
    return pairs;
}

}  // namespace

TEST_CASE("identity pairs fit the identity map") {
    const auto pairs = grid_pairs([](Vec2 p) { return p; });
    const PolyMap2 m = fit_poly_calibration(pairs);
    const std::array<double, 6> want_a{0, 1, 0, 0, 0, 0};
    const std::array<double, 6> want_b{0, 0, 1, 0, 0, 0};
    for (int k = 0; k < 6; ++k) {
        CHECK(m.a[k] == doctest::Approx(want_a[k]).scale(1.0).epsilon(1e-10));
        CHECK(m.b[k] == doctest::Approx(want_b[k]).scale(1.0).epsilon(1e-10));
    }
    CHECK(m.fit_rms < 1e-10);
}

TEST_CASE("apply evaluates the polynomial basis exactly") {
    PolyMap2 m = PolyMap2::identity();
    CHECK(m.apply({3.2, -1.1}).x == doctest::Approx(3.2));
    CHECK(m.apply({3.2, -1.1}).y == doctest::Approx(-1.1));

    PolyMap2 picks;
    picks.a = {1, 0, 0, 0, 0, 0};  // constant
    picks.b = {0, 0, 0, 0, 0, 1};  // y^2
    const Vec2 out = picks.apply({2.0, 3.0});
    CHECK(out.x == doctest::Approx(1.0));
    CHECK(out.y == doctest::Approx(9.0));
}

TEST_CASE("a known quadratic warp is recovered exactly from 9 grid points") {
    // truth = warp(raw) with warp in the polynomial span; the fit must
    // reproduce the forward-warp oracle on every grid point
    const auto warp = [](Vec2 p) {
        return Vec2{1.05 * p.x - 0.02 * p.y + 0.8 + 0.003 * p.x * p.y,
                    0.97 * p.y + 0.01 * p.x - 0.5 + 0.002 * p.x * p.x};
    };
    const auto pairs = grid_pairs(warp);
    const PolyMap2 m = fit_poly_calibration(pairs);
    double max_err = 0.0;
    for (const auto& p : pairs) {
        const Vec2 rec = m.apply(p.raw);
        max_err = std::max(max_err, (rec - p.truth).norm());
    }
    CHECK(max_err <= 1e-8);
    CHECK(m.fit_rms <= 1e-8);
}

TEST_CASE("collinear calibration points are rank deficient") {
    std::vector<CalibrationPair> pairs;
    for (int i = 0; i < 9; ++i) {
        const double t = i * 2.0;
        pairs.push_back({{t, 2.0 * t}, {t, 2.0 * t}});
    }
    CHECK_THROWS_AS(fit_poly_calibration(pairs), RankDeficient);
    CHECK_THROWS_AS(fit_poly_calibration(std::vector<CalibrationPair>(5)), RankDeficient);
}

TEST_CASE("calibration helps on held-out warped points") {
    const auto warp = [](Vec2 p) {
        return Vec2{1.08 * p.x + 1.2 + 0.002 * p.x * p.x, 0.94 * p.y - 0.9 + 0.004 * p.x * p.y};
    };
    const PolyMap2 m = fit_poly_calibration(grid_pairs(warp));
    Rng rng(13);
    double with = 0.0, without = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Vec2 raw{rng.uniform(-25, 25), rng.uniform(-14, 14)};
        const Vec2 truth = warp(raw);
        with += (m.apply(raw) - truth).norm();
        without += (raw - truth).norm();
    }
    CHECK(with < without);
    CHECK(with / 200.0 < 1e-6);
}

TEST_CASE("least squares never loses to the identity on the fitting set") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const double s = 1.0 + rng.uniform(-0.2, 0.2);
        const double bx = rng.uniform(-2, 2);
        std::vector<CalibrationPair> pairs = grid_pairs([&](Vec2 p) {
            return Vec2{s * p.x + bx + 0.05 * rng.gaussian(), p.y + 0.05 * rng.gaussian()};
        });
        const PolyMap2 m = fit_poly_calibration(pairs);
        double fitted = 0.0, identity = 0.0;
        for (const auto& p : pairs) {
            fitted += (m.apply(p.raw) - p.truth).norm();
            identity += (p.raw - p.truth).norm();
        }
        CHECK(fitted <= identity + 1e-9);
    }
}

TEST_CASE("the fit is equivariant under reordering of the pairs") {
    const auto warp = [](Vec2 p) {
        return Vec2{1.03 * p.x + 0.4, 0.98 * p.y - 0.2 + 0.001 * p.x * p.x};
    };
    auto pairs = grid_pairs(warp);
    const PolyMap2 a = fit_poly_calibration(pairs);
    std::reverse(pairs.begin(), pairs.end());
    std::swap(pairs[2], pairs[5]);
    const PolyMap2 b = fit_poly_calibration(pairs);
    for (int k = 0; k < 6; ++k) {
        CHECK(a.a[k] == doctest::Approx(b.a[k]).scale(1.0).epsilon(1e-9));
        CHECK(a.b[k] == doctest::Approx(b.b[k]).scale(1.0).epsilon(1e-9));
    }
}

TEST_CASE("polymap JSON round trip") {
    PolyMap2 m;
    m.a = {0.1, 1.2, -0.3, 0.04, 0.005, -0.0006};
    m.b = {-0.2, 0.02, 0.98, -0.01, 0.002, 0.0031};
    m.fit_rms = 0.123;
    const PolyMap2 back = polymap_from_json(polymap_to_json(m));
    CHECK(back.a == m.a);
    CHECK(back.b == m.b);
    CHECK(back.fit_rms == m.fit_rms);
}
