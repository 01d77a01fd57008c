#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gaze3d/vec.hpp"

namespace gaze3d {

// One eye's detected points in image pixels: pupil center o, eight eyelid
// points a..h (a = nasal corner, then clockwise), corneal reflections m,n
// (always visible) and p,q (lower pair, occluded when looking down).
struct LandmarkSet {
    Vec2 o;
    std::array<Vec2, 8> eyelid;  // a..h
    Vec2 m;
    Vec2 n;
    std::optional<Vec2> p;
    std::optional<Vec2> q;
    double pupil_radius = 0.0;  // pixels
};

// The thirteen per-eye features: eight pupil-to-eyelid displacement vectors,
// two pupil-to-reflection displacement vectors and three corner/reflection
// angles. Flattened scalar length 23.
struct FeatureVector13 {
    std::array<Vec2, 8> v_eyelid;  // v_oa .. v_oh
    Vec2 v_om;
    Vec2 v_on;
    double theta1 = 0.0;  // inner corner angle at a, degrees
    double theta2 = 0.0;  // outer corner angle at e, degrees
    double theta3 = 0.0;  // angle between v_om and v_on, degrees

    static constexpr int kNamedCount = 13;
    static constexpr int kFlatLength = 23;

    std::array<double, kFlatLength> flatten() const;
    static const std::vector<std::string>& names();  // 23 column names
};

FeatureVector13 extract_features(const LandmarkSet& lm);

// one row per landmark set, exactly the 23 feature columns
std::string feature_matrix_csv(const std::vector<LandmarkSet>& landmarks);

}  // namespace gaze3d
