#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gaze3d/errors.hpp"
#include "gaze3d/psom.hpp"
#include "gaze3d/rng.hpp"

using namespace gaze3d;

namespace {

constexpr double kGX[3] = {-27.0, 0.0, 27.0};
constexpr double kGY[3] = {-15.5, 0.0, 15.5};

// reference vectors from a smooth warp of the grid coordinate; the kind of
// map a real binocular calibration produces
std::array<double, 4> smooth_ref(const Vec2& s) {
    return {0.95 * s.x + 0.02 * s.y + 0.0008 * s.x * s.y + 2.0,
            0.98 * s.y - 0.01 * s.x + 0.0005 * s.x * s.x - 1.0,
            1.04 * s.x - 0.015 * s.y - 0.0006 * s.x * s.y - 2.0,
            1.01 * s.y + 0.02 * s.x - 0.0004 * s.y * s.y + 1.0};
}

PsomNet smooth_net() {
    std::vector<PsomNode> nodes;
    for (int iy = 0; iy < 3; ++iy) {
        for (int ix = 0; ix < 3; ++ix) {
            const Vec2 s{kGX[ix], kGY[iy]};
            nodes.push_back({s, smooth_ref(s)});
        }
    }
    return psom_calibrate(nodes);
}

}  // namespace

TEST_CASE("calibration gives node exactness") {
    const PsomNet net = smooth_net();
    for (int iy = 0; iy < 3; ++iy) {
        for (int ix = 0; ix < 3; ++ix) {
            const auto f = net.forward(net.node(ix, iy));
            const auto want = smooth_ref(net.node(ix, iy));
            for (int c = 0; c < 4; ++c) {
                CHECK(std::abs(f[c] - want[c]) < 1e-9);
            }
        }
    }
}

TEST_CASE("degenerate lattices are rejected") {
    std::vector<PsomNode> nodes;
    for (int iy = 0; iy < 3; ++iy) {
        for (int ix = 0; ix < 3; ++ix) {
            // two equal X columns
            const double x = ix == 2 ? kGX[1] : kGX[ix];
            nodes.push_back({{x, kGY[iy]}, {0, 0, 0, 0}});
        }
    }
    CHECK_THROWS_AS(psom_calibrate(nodes), NotALattice);
    CHECK_THROWS_AS(psom_calibrate(std::vector<PsomNode>(8)), NotALattice);
}

TEST_CASE("basis weights sum to one everywhere") {
    // interpolating constant reference vectors isolates sum(H) exactly
    std::vector<PsomNode> nodes;
    for (int iy = 0; iy < 3; ++iy) {
        for (int ix = 0; ix < 3; ++ix) {
            nodes.push_back({{kGX[ix], kGY[iy]}, {1.0, 1.0, 1.0, 1.0}});
        }
    }
    const PsomNet net = psom_calibrate(nodes);
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const Vec2 s{rng.uniform(-30, 30), rng.uniform(-18, 18)};
        const auto f = net.forward(s);
        for (int c = 0; c < 4; ++c) CHECK(std::abs(f[c] - 1.0) < 1e-10);
    }
}

TEST_CASE("forward matches an explicit Lagrange basis expansion") {
    const PsomNet net = smooth_net();
    Rng rng(5);
    auto l3 = [](const double t[3], double x, int i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        return (x - t[j]) * (x - t[k]) / ((t[i] - t[j]) * (t[i] - t[k]));
    };
    for (int trial = 0; trial < 50; ++trial) {
        const Vec2 s{rng.uniform(-27, 27), rng.uniform(-15.5, 15.5)};
        std::array<double, 4> expect{};
        for (int iy = 0; iy < 3; ++iy) {
            for (int ix = 0; ix < 3; ++ix) {
                const double h = l3(kGX, s.x, ix) * l3(kGY, s.y, iy);
                const auto w = smooth_ref({kGX[ix], kGY[iy]});
                for (int c = 0; c < 4; ++c) expect[c] += h * w[c];
            }
        }
        const auto f = net.forward(s);
        for (int c = 0; c < 4; ++c) {
            CHECK(f[c] == doctest::Approx(expect[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("midpoint values of a bilinear generator are reproduced closely") {
    // w generated from a bilinear map: degree-2 Lagrange reproduces degree-1
    // functions exactly, so midpoints must match the generator
    auto bilinear = [](const Vec2& s) {
        return std::array<double, 4>{0.9 * s.x + 1.0, 1.1 * s.y - 2.0,
                                     0.8 * s.x + 0.1 * s.y, s.y - 0.2 * s.x};
    };
    std::vector<PsomNode> nodes;
    for (int iy = 0; iy < 3; ++iy) {
        for (int ix = 0; ix < 3; ++ix) {
            nodes.push_back({{kGX[ix], kGY[iy]}, bilinear({kGX[ix], kGY[iy]})});
        }
    }
    const PsomNet net = psom_calibrate(nodes);
    for (double x : {-13.5, 13.5}) {
        for (double y : {-7.75, 7.75}) {
            const auto f = net.forward({x, y});
            const auto want = bilinear({x, y});
            for (int c = 0; c < 4; ++c) {
                CHECK(f[c] == doctest::Approx(want[c]).epsilon(0.02));
            }
        }
    }
}

TEST_CASE("analytic gradient matches central differences") {
    const PsomNet net = smooth_net();
    Rng rng(7);
    const double h = 1e-5;
    for (int t = 0; t < 100; ++t) {
        const Vec2 s{rng.uniform(-27, 27), rng.uniform(-15.5, 15.5)};
        const auto f_et = net.forward({rng.uniform(-27, 27), rng.uniform(-15.5, 15.5)});
        const Vec2 g = psom_error_gradient(net, f_et, s);

        auto err = [&](const Vec2& q) {
            const auto f = net.forward(q);
            double e = 0.0;
            for (int c = 0; c < 4; ++c) e += (f[c] - f_et[c]) * (f[c] - f_et[c]);
            return 0.5 * e;
        };
        const Vec2 fd{(err({s.x + h, s.y}) - err({s.x - h, s.y})) / (2 * h),
                      (err({s.x, s.y + h}) - err({s.x, s.y - h})) / (2 * h)};
        const double denom = std::max({1e-12, g.norm(), fd.norm()});
        CHECK((g - fd).norm() / denom < 1e-5);
    }
}

TEST_CASE("inverting a node's reference vector recovers the node") {
    const PsomNet net = smooth_net();
    const Vec2 center = net.node(1, 1);
    const InversionResult res = psom_invert(net, net.forward(center), {});
    CHECK(res.converged);
    CHECK((res.s - center).norm() < 1e-6);
}

TEST_CASE("invert(forward(s)) round trip over the lattice hull") {
    const PsomNet net = smooth_net();
    double worst = 0.0;
    for (int gy = 0; gy < 21; ++gy) {
        for (int gx = 0; gx < 21; ++gx) {
            const Vec2 s{kGX[0] + (kGX[2] - kGX[0]) * gx / 20.0,
                         kGY[0] + (kGY[2] - kGY[0]) * gy / 20.0};
            const InversionResult res = psom_invert(net, net.forward(s), {});
            CHECK(res.converged);
            worst = std::max(worst, (res.s - s).norm());
        }
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("unreachable targets return a flagged finite best iterate") {
    const PsomNet net = smooth_net();
    auto f_et = net.forward({5.0, 3.0});
    for (auto& v : f_et) v *= 10.0;  // far outside the attainable range
    const InversionResult res = psom_invert(net, f_et, {});
    CHECK_FALSE(res.converged);
    CHECK(std::isfinite(res.s.x));
    CHECK(std::isfinite(res.s.y));
    CHECK(res.error > 0.0);
}

TEST_CASE("descent error is nonincreasing with backtracking") {
    const PsomNet net = smooth_net();
    const auto f_et = net.forward({9.0, -4.0});
    InversionConfig cfg;
    cfg.max_iter = 1;
    double prev = 1e300;
    // re-running with a growing iteration budget traces the E(s(t)) path
    for (int budget = 1; budget <= 40; budget += 3) {
        cfg.max_iter = budget;
        const InversionResult res = psom_invert(net, f_et, cfg);
        CHECK(res.error <= prev + 1e-12);
        prev = res.error;
    }
}

TEST_CASE("fixed-step mode follows the plain gradient iteration") {
    const PsomNet net = smooth_net();
    const Vec2 target{4.0, 2.0};
    const auto f_et = net.forward(target);
    InversionConfig cfg;
    cfg.backtracking = false;
    cfg.step = 0.05;
    cfg.max_iter = 4000;
    const InversionResult res = psom_invert(net, f_et, cfg);
    CHECK(res.converged);
    CHECK((res.s - target).norm() < 1e-4);
}

TEST_CASE("psom JSON round trip") {
    const PsomNet net = smooth_net();
    const PsomNet back = psom_from_json(psom_to_json(net));
    CHECK(back.xs == net.xs);
    CHECK(back.ys == net.ys);
    CHECK(back.w == net.w);
}
