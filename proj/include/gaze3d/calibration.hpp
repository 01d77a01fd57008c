#pragma once

#include <array>
#include <string>
#include <vector>

#include "gaze3d/vec.hpp"

namespace gaze3d {

// Per-user second-order polynomial correction of raw 2D gaze, one map per eye.
// Basis [1, x, y, xy, x^2, y^2]; coefficients a for the x output, b for y.
struct PolyMap2 {
    std::array<double, 6> a{0, 1, 0, 0, 0, 0};
    std::array<double, 6> b{0, 0, 1, 0, 0, 0};
    double fit_rms = 0.0;  // residual on the calibration pairs

    Vec2 apply(const Vec2& raw) const;

    static PolyMap2 identity() { return {}; }
};

struct CalibrationPair {
    Vec2 raw;   // gaze estimated on the plane, cm
    Vec2 truth; // marker position, cm
};

// Two independent 6-coefficient least-squares solves (QR). Needs >= 6 pairs
// whose design matrix has full rank; the 3x3 grid satisfies this.
PolyMap2 fit_poly_calibration(const std::vector<CalibrationPair>& pairs);

std::string polymap_to_json(const PolyMap2& map);
PolyMap2 polymap_from_json(const std::string& text);

}  // namespace gaze3d
