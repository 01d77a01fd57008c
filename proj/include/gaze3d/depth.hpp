#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaze3d/cross_validation.hpp"
#include "gaze3d/geometry.hpp"
#include "gaze3d/landmarks.hpp"
#include "gaze3d/matrix.hpp"
#include "gaze3d/regressor.hpp"
#include "gaze3d/scene.hpp"
#include "gaze3d/synth.hpp"

namespace gaze3d {

// The seven-column multi-source feature record for gaze depth regression.
struct DepthFeatureRow {
    double v_xl = 0.0;       // x components of the two gaze directions
    double v_xr = 0.0;
    double alpha = 0.0;      // vergence angle, degrees
    double delta_x = 0.0;    // horizontal distance of the two 2D gaze points, cm
    double ipd_obs = 0.0;    // |x_pr - x_pl| across the two eye images, pixels
    double pupil_mean = 0.0; // (R_l + R_r)/2, pixels
    double disparity = 0.0;  // stimulus disparity at the 2D gaze midpoint, cm
    double z = 0.0;          // depth label, scene units

    static constexpr int kFeatureCount = 7;
    static const std::vector<std::string>& feature_names();
    std::array<double, kFeatureCount> features() const;
};

// Disparity of the stereo stimulus as a function of gaze-plane position.
using DisparityField = std::function<double(double x, double y)>;

// Stimulus-derived field for a synthetic scene: the screen parallax of the
// marker whose projection is nearest to the query (within marker_radius cm),
// the background parallax elsewhere.
DisparityField scene_disparity_field(const SceneSpec& scene, const BinocularConfig& cfg,
                                     const GazePlane& plane, double marker_radius = 3.0);

// Externally supplied row-major disparity grid over the plane, cm units,
// sampled bilinearly.
struct DisparityGrid {
    Matrix values;     // rows x cols over the plane area
    double x0 = 0.0, y0 = 0.0;  // cm of grid cell (0,0)
    double dx = 1.0, dy = 1.0;

    double sample(double x, double y) const;
    DisparityField field() const;
};

DepthFeatureRow build_depth_features(const GazeRay& left, const GazeRay& right,
                                     const Vec2& p1, const Vec2& p2,
                                     const LandmarkSet& lm_left, const LandmarkSet& lm_right,
                                     const DisparityField& disparity, double z_label);

// Measured feature table for a whole dataset: gaze rays are recovered from
// the noisy pupil landmarks through the inverse rendering map, so landmark
// noise propagates into every derived column.
struct DepthTable {
    Matrix X;                 // n x 7
    std::vector<double> z;    // labels in scene units
    std::vector<int> subject_id;
    std::vector<int> plane_index;
    std::string unit_name;

    std::string to_csv() const;
};

DepthTable depth_table_from_dataset(const Dataset& ds, const GazePlane& plane,
                                    const DisparityField& disparity);

struct CorrelationReport {
    std::vector<std::string> feature;
    std::vector<double> r_with_depth;      // NaN flags a degenerate column
    Matrix full;                            // (7+1)x(7+1) matrix incl. depth

    std::string to_csv() const;
};

CorrelationReport pearson_corr(const DepthTable& table);
double pearson(std::span<const double> a, std::span<const double> b);

struct ImportanceReport {
    std::vector<std::string> feature;
    std::vector<double> importance;  // normalized, sums to 1
    std::vector<int> ranking;        // feature indices, most important first

    std::string to_csv() const;
};

struct ForestConfig {
    int n_trees = 100;
    int max_depth = 8;
    int min_samples_leaf = 2;
    // 0 = round(sqrt(n_features))
    int max_features = 0;
};

// Gini-style importance from a bagged ensemble of variance-reduction trees
// (bootstrap rows, per-node feature subsampling). Per-tree seeds make the
// OpenMP and serial variants identical.
ImportanceReport gini_importance(const DepthTable& table, std::uint64_t seed,
                                 const ForestConfig& cfg = {});
ImportanceReport gini_importance_serial(const DepthTable& table, std::uint64_t seed,
                                        const ForestConfig& cfg = {});

struct DepthModelResult {
    ModelKind kind;
    AnyModel model;
    CvReport cv;
};

DepthModelResult train_depth_model(const DepthTable& table, ModelKind kind, int cv_k,
                                   std::uint64_t seed, const ModelConfigs& cfg = {});

// highest mean CV R^2; ties by lower MSE, then the fixed kind order
ModelKind select_best(const std::vector<CvReport>& reports,
                      const std::vector<ModelKind>& kinds);

}  // namespace gaze3d
