#pragma once

#include <string>
#include <vector>

#include "gaze3d/geometry.hpp"
#include "gaze3d/vec.hpp"

namespace gaze3d {

struct TestPoint {
    int id = 0;
    Vec3 position;      // world cm
    int plane_index = 0;
};

// A stimulus scene: fixation targets inside a workspace box centered on the
// optical axis (x in [-w/2, w/2], y in [-h/2, h/2], z in (0, d]).
struct SceneSpec {
    std::string name;
    std::vector<TestPoint> test_points;
    double workspace_w = 0.0;
    double workspace_h = 0.0;
    double workspace_d = 0.0;
    // depth of the featureless background behind the markers, used by the
    // stimulus disparity field
    double background_depth = 35.0;
    // depth label unit for reporting ("cm" or "m")
    double depth_unit_cm = 1.0;
    std::string depth_unit_name = "cm";

    bool contains(const Vec3& p) const {
        return p.x >= -workspace_w / 2 && p.x <= workspace_w / 2 &&
               p.y >= -workspace_h / 2 && p.y <= workspace_h / 2 &&
               p.z > 0 && p.z <= workspace_d;
    }
    std::vector<double> plane_depths() const;
};

// Close-range virtual scene: a 3x3 grid of sight-lines through screen
// positions u in {-11,0,11}, v in {-6.5,0,6.5} cm, with one target per
// sight-line on each of the four depth planes 15/35/55/75 cm. 36 points.
SceneSpec scene1_spec();

// Far-range scene: 9 targets at evenly increasing depths 0.8 m .. 7.9 m in a
// 240 x 400 x 790 cm workspace, depth labels reported in meters.
SceneSpec scene2_spec();

// The 9-position on-plane marker grid used for per-user 2D calibration and
// PSOM node placement (3x3 lattice on the gaze plane).
SceneSpec calibration_grid(const GazePlane& plane = GazePlane{});

std::string scene_to_json(const SceneSpec& scene);
SceneSpec scene_from_json(const std::string& text);

}  // namespace gaze3d
