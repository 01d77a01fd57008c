#pragma once

#include "gaze3d/landmarks.hpp"
#include "gaze3d/matrix.hpp"
#include "gaze3d/rng.hpp"
#include "gaze3d/vec.hpp"

namespace gaze3d::test {

// a plausible hand-built landmark set around the image center
inline LandmarkSet sample_landmarks() {
    LandmarkSet lm;
    const Vec2 c{960.0, 540.0};
    lm.o = c + Vec2{12.0, -4.0};
    const Vec2 lid[8] = {{-150, 0}, {-105, -48}, {0, -66}, {105, -48},
                         {150, 0},  {105, 48},   {0, 66},  {-105, 48}};
    for (int i = 0; i < 8; ++i) lm.eyelid[i] = c + lid[i];
    lm.m = c + Vec2{-62, -20};
    lm.n = c + Vec2{62, -20};
    lm.p = c + Vec2{-62, 42};
    lm.q = c + Vec2{62, 42};
    lm.pupil_radius = 48.0;
    return lm;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                            double scale = 1.0) {
    Matrix m(rows, cols);
    for (auto& v : m.data) v = scale * rng.gaussian();
    return m;
}

}  // namespace gaze3d::test
