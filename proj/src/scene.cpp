#include "gaze3d/scene.hpp"

#include <algorithm>

#include "json.hpp"

namespace gaze3d {

std::vector<double> SceneSpec::plane_depths() const {
    std::vector<double> zs;
    for (const auto& tp : test_points) {
        if (std::find(zs.begin(), zs.end(), tp.position.z) == zs.end()) {
            zs.push_back(tp.position.z);
        }
    }
    std::sort(zs.begin(), zs.end());
    return zs;
}

namespace {
constexpr double kScreenU[3] = {-27.0, 0.0, 27.0};  // calibration marker grid, cm
constexpr double kScreenV[3] = {-15.5, 0.0, 15.5};
constexpr double kScene1U[3] = {-25.0, 0.0, 25.0};
constexpr double kScene1V[3] = {-14.0, 0.0, 14.0};
constexpr double kScene1Depths[4] = {15.0, 35.0, 55.0, 75.0};
// each depth plane's grid is shifted on screen so that no two markers of the
// rendered stereo scene coincide
constexpr double kScene1OffU[4] = {-1.4, 1.4, -1.4, 1.4};
constexpr double kScene1OffV[4] = {-1.0, -1.0, 1.0, 1.0};
constexpr double kScreenDepth = 85.0;  // gaze-plane distance the grids refer to
}  // namespace

SceneSpec scene1_spec() {
    SceneSpec s;
    s.name = "scene1";
    s.workspace_w = 50.0;
    s.workspace_h = 30.0;
    s.workspace_d = 75.0;
    s.background_depth = 85.0;
    int id = 1;
    for (int plane = 0; plane < 4; ++plane) {
        const double z = kScene1Depths[plane];
        for (int gv = 0; gv < 3; ++gv) {
            for (int gu = 0; gu < 3; ++gu) {
                // targets on each plane sit on the sight-lines through that
                // plane's 3x3 screen grid, like markers of a rendered stereo
                // scene
                const double scale = z / kScreenDepth;
                const double u = kScene1U[gu] + kScene1OffU[plane];
                const double v = kScene1V[gv] + kScene1OffV[plane];
                s.test_points.push_back({id++, {u * scale, v * scale, z}, plane});
            }
        }
    }
    return s;
}

SceneSpec scene2_spec() {
    SceneSpec s;
    s.name = "scene2";
    s.workspace_w = 240.0;
    s.workspace_h = 400.0;
    s.workspace_d = 790.0;
    s.background_depth = 790.0;
    s.depth_unit_cm = 100.0;
    s.depth_unit_name = "m";
    const double u[3] = {-10.0, 0.0, 10.0};
    const double v[3] = {-6.0, 0.0, 6.0};
    for (int i = 0; i < 9; ++i) {
        const double z = 80.0 + i * (790.0 - 80.0) / 8.0;
        const double scale = z / kScreenDepth;
        s.test_points.push_back({i + 1, {u[i % 3] * scale, v[i / 3] * scale, z}, i});
    }
    return s;
}

SceneSpec calibration_grid(const GazePlane& plane) {
    SceneSpec s;
    s.name = "calib3x3";
    s.workspace_w = plane.width;
    s.workspace_h = plane.height;
    s.workspace_d = plane.distance;
    s.background_depth = plane.distance;
    int id = 1;
    for (int gv = 0; gv < 3; ++gv) {
        for (int gu = 0; gu < 3; ++gu) {
            s.test_points.push_back({id++, {kScreenU[gu], kScreenV[gv], plane.distance}, 0});
        }
    }
    return s;
}

std::string scene_to_json(const SceneSpec& scene) {
    nlohmann::json j;
    j["name"] = scene.name;
    j["workspace"] = {scene.workspace_w, scene.workspace_h, scene.workspace_d};
    j["background_depth"] = scene.background_depth;
    j["depth_unit_cm"] = scene.depth_unit_cm;
    j["depth_unit_name"] = scene.depth_unit_name;
    auto pts = nlohmann::json::array();
    for (const auto& tp : scene.test_points) {
        pts.push_back({{"id", tp.id},
                       {"xyz", {tp.position.x, tp.position.y, tp.position.z}},
                       {"plane", tp.plane_index}});
    }
    j["test_points"] = pts;
    return j.dump(2) + "\n";
}

SceneSpec scene_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SceneSpec s;
    s.name = j.at("name").get<std::string>();
    s.workspace_w = j.at("workspace").at(0).get<double>();
    s.workspace_h = j.at("workspace").at(1).get<double>();
    s.workspace_d = j.at("workspace").at(2).get<double>();
    s.background_depth = j.value("background_depth", 35.0);
    s.depth_unit_cm = j.value("depth_unit_cm", 1.0);
    s.depth_unit_name = j.value("depth_unit_name", std::string("cm"));
    for (const auto& p : j.at("test_points")) {
        TestPoint tp;
        tp.id = p.at("id").get<int>();
        tp.position = {p.at("xyz").at(0).get<double>(), p.at("xyz").at(1).get<double>(),
                       p.at("xyz").at(2).get<double>()};
        tp.plane_index = p.at("plane").get<int>();
        s.test_points.push_back(tp);
    }
    return s;
}

}  // namespace gaze3d
