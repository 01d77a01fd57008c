#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gaze3d/errors.hpp"
#include "gaze3d/landmarks.hpp"
#include "gaze3d/rng.hpp"

#include <algorithm>
#include <sstream>
#include "helpers.hpp"

using namespace gaze3d;

TEST_CASE("the feature set has 13 named features and 23 scalars") {
    CHECK(FeatureVector13::kNamedCount == 13);
    CHECK(FeatureVector13::kFlatLength == 23);
    CHECK(FeatureVector13::names().size() == 23);
    const auto f = extract_features(test::sample_landmarks());
    CHECK(f.flatten().size() == 23);
}

TEST_CASE("mirror-symmetric landmarks give mirrored reflection vectors") {
    LandmarkSet lm = test::sample_landmarks();
    lm.o = {960.0, 540.0};  // center o so m,n are symmetric about it
    const auto f = extract_features(lm);
    CHECK(f.v_om.x == doctest::Approx(-f.v_on.x).epsilon(1e-12));
    CHECK(f.v_om.y == doctest::Approx(f.v_on.y).epsilon(1e-12));
    CHECK(f.theta3 > 0.0);
    CHECK(f.theta3 < 180.0);
}

TEST_CASE("a reflection on the pupil center is degenerate") {
    LandmarkSet lm = test::sample_landmarks();
    lm.m = lm.o;
    CHECK_THROWS_AS(extract_features(lm), DegenerateLandmarks);
    lm = test::sample_landmarks();
    lm.eyelid[3] = lm.o;
    CHECK_THROWS_AS(extract_features(lm), DegenerateLandmarks);
}

TEST_CASE("features are invariant under translation of all landmarks") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        LandmarkSet lm = test::sample_landmarks();
        const Vec2 shift{rng.uniform(-200, 200), rng.uniform(-200, 200)};
        LandmarkSet moved = lm;
        moved.o = lm.o + shift;
        for (int i = 0; i < 8; ++i) moved.eyelid[i] = lm.eyelid[i] + shift;
        moved.m = lm.m + shift;
        moved.n = lm.n + shift;
        const auto a = extract_features(lm).flatten();
        const auto b = extract_features(moved).flatten();
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));
        }
    }
}

TEST_CASE("uniform scaling about o scales displacements and keeps angles") {
    const LandmarkSet lm = test::sample_landmarks();
    const double scale = 2.75;
    LandmarkSet big = lm;
    auto stretch = [&](const Vec2& p) { return lm.o + (p - lm.o) * scale; };
    for (int i = 0; i < 8; ++i) big.eyelid[i] = stretch(lm.eyelid[i]);
    big.m = stretch(lm.m);
    big.n = stretch(lm.n);
    const auto a = extract_features(lm);
    const auto b = extract_features(big);
    CHECK(b.theta3 == doctest::Approx(a.theta3).epsilon(1e-10));
    CHECK(b.theta1 == doctest::Approx(a.theta1).epsilon(1e-10));
    CHECK(b.v_om.x == doctest::Approx(a.v_om.x * scale).epsilon(1e-12));
    CHECK(b.v_eyelid[2].y == doctest::Approx(a.v_eyelid[2].y * scale).epsilon(1e-12));
}

TEST_CASE("extraction ignores the optional p,q reflections") {
    LandmarkSet lm = test::sample_landmarks();
    const auto with = extract_features(lm).flatten();
    lm.p.reset();
    lm.q.reset();
    const auto without = extract_features(lm).flatten();
    CHECK(with == without);
}

TEST_CASE("the feature matrix CSV has the fixed 23-column header") {
    const std::vector<LandmarkSet> lms{test::sample_landmarks(), test::sample_landmarks()};
    const std::string csv = feature_matrix_csv(lms);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    std::string expect;
    for (const auto& n : FeatureVector13::names()) {
        if (!expect.empty()) expect += ',';
        expect += n;
    }
    CHECK(header == expect);
    CHECK(std::count(header.begin(), header.end(), ',') == 22);
    int rows = 0;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("extraction is deterministic") {
    const LandmarkSet lm = test::sample_landmarks();
    CHECK(extract_features(lm).flatten() == extract_features(lm).flatten());
}
