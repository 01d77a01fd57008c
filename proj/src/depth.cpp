#include "gaze3d/depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gaze3d/csv.hpp"
#include "gaze3d/errors.hpp"
#include "gaze3d/rng.hpp"
#include "gaze3d/trees.hpp"

namespace gaze3d {

const std::vector<std::string>& DepthFeatureRow::feature_names() {
    static const std::vector<std::string> names = {
        "v_xl", "v_xr", "alpha_deg", "delta_x_cm", "ipd_obs_px", "pupil_mean_px",
        "disparity_cm"};
    return names;
}

std::array<double, DepthFeatureRow::kFeatureCount> DepthFeatureRow::features() const {
    return {v_xl, v_xr, alpha, delta_x, ipd_obs, pupil_mean, disparity};
}

DisparityField scene_disparity_field(const SceneSpec& scene, const BinocularConfig& cfg,
                                     const GazePlane& plane, double marker_radius) {
    struct Marker {
        Vec2 screen;
        double parallax;
    };
    std::vector<Marker> markers;
    markers.reserve(scene.test_points.size());
    for (const auto& tp : scene.test_points) {
        // cyclopean projection of the marker onto the plane
        const double s = plane.distance / tp.position.z;
        markers.push_back({{tp.position.x * s, tp.position.y * s},
                           disparity_from_depth(tp.position, cfg)});
    }
    const double background =
        cfg.interpupillary_distance * (scene.background_depth - cfg.zero_parallax_depth) /
        scene.background_depth;
    return [markers, background, marker_radius](double x, double y) {
        double best = std::numeric_limits<double>::infinity();
        double value = background;
        for (const auto& m : markers) {
            const double d = std::hypot(m.screen.x - x, m.screen.y - y);
            if (d <= marker_radius && d < best) {
                best = d;
                value = m.parallax;
            }
        }
        return value;
    };
}

double DisparityGrid::sample(double x, double y) const {
    const double gx = (x - x0) / dx;
    const double gy = (y - y0) / dy;
    const double cx = std::clamp(gx, 0.0, static_cast<double>(values.cols - 1));
    const double cy = std::clamp(gy, 0.0, static_cast<double>(values.rows - 1));
    const std::size_t ix = std::min(values.cols - 2, static_cast<std::size_t>(cx));
    const std::size_t iy = std::min(values.rows - 2, static_cast<std::size_t>(cy));
    const double fx = cx - ix;
    const double fy = cy - iy;
    return values(iy, ix) * (1 - fx) * (1 - fy) + values(iy, ix + 1) * fx * (1 - fy) +
           values(iy + 1, ix) * (1 - fx) * fy + values(iy + 1, ix + 1) * fx * fy;
}

DisparityField DisparityGrid::field() const {
    DisparityGrid copy = *this;
    return [copy](double x, double y) { return copy.sample(x, y); };
}

DepthFeatureRow build_depth_features(const GazeRay& left, const GazeRay& right,
                                     const Vec2& p1, const Vec2& p2,
                                     const LandmarkSet& lm_left, const LandmarkSet& lm_right,
                                     const DisparityField& disparity, double z_label) {
    if (!(lm_left.pupil_radius > 0.0) || !(lm_right.pupil_radius > 0.0)) {
        throw MissingPupil("pupil radius is missing or non-positive");
    }
    DepthFeatureRow row;
    row.v_xl = left.direction.x;
    row.v_xr = right.direction.x;
    row.alpha = vergence_angle(left, right);
    row.delta_x = std::abs(p1.x - p2.x);
    row.ipd_obs = std::abs(lm_right.o.x - lm_left.o.x);
    row.pupil_mean = 0.5 * (lm_left.pupil_radius + lm_right.pupil_radius);
    const Vec2 mid = 0.5 * (p1 + p2);
    row.disparity = disparity(mid.x, mid.y);
    row.z = z_label;
    return row;
}

DepthTable depth_table_from_dataset(const Dataset& ds, const GazePlane& plane,
                                    const DisparityField& disparity) {
    DepthTable table;
    table.unit_name = ds.scene.depth_unit_name;
    table.X = Matrix(0, DepthFeatureRow::kFeatureCount);

    for (std::size_t i = 0; i + 1 < ds.frames.size(); ++i) {
        const EyeFrame& a = ds.frames[i];
        const EyeFrame& b = ds.frames[i + 1];
        if (a.eye != Eye::Left || b.eye != Eye::Right || a.subject_id != b.subject_id ||
            a.point_id != b.point_id || a.frame_index != b.frame_index) {
            continue;
        }
        const SubjectParams& subj = ds.subject(a.subject_id);
        const Vec3 dir_l = gaze_from_landmarks(subj, a.landmarks);
        const Vec3 dir_r = gaze_from_landmarks(subj, b.landmarks);
        const GazeRay ray_l{subj.eye_center(Eye::Left) + subj.eyeball_radius * dir_l, dir_l};
        const GazeRay ray_r{subj.eye_center(Eye::Right) + subj.eyeball_radius * dir_r, dir_r};
        const Vec2 p1 = ray_plane_intersect(ray_l, plane).cm;
        const Vec2 p2 = ray_plane_intersect(ray_r, plane).cm;
        const DepthFeatureRow row =
            build_depth_features(ray_l, ray_r, p1, p2, a.landmarks, b.landmarks, disparity,
                                 a.true_target.z / ds.scene.depth_unit_cm);
        table.X.push_row(row.features());
        table.z.push_back(row.z);
        table.subject_id.push_back(a.subject_id);
        table.plane_index.push_back(a.plane_index);
        ++i;  // consumed the pair
    }
    return table;
}

std::string DepthTable::to_csv() const {
    std::ostringstream out;
    out << "subject_id,plane_index";
    for (const auto& n : DepthFeatureRow::feature_names()) out << ',' << n;
    out << ",z_" << unit_name << '\n';
    for (std::size_t i = 0; i < X.rows; ++i) {
        out << subject_id[i] << ',' << plane_index[i];
        for (std::size_t j = 0; j < X.cols; ++j) out << ',' << format_double(X(i, j));
        out << ',' << format_double(z[i]) << '\n';
    }
    return out.str();
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

CorrelationReport pearson_corr(const DepthTable& table) {
    if (table.X.rows < 3) throw TooFewSamples("pearson_corr needs at least 3 rows");
    const std::size_t d = DepthFeatureRow::kFeatureCount;
    CorrelationReport rep;
    rep.feature = DepthFeatureRow::feature_names();
    rep.full = Matrix(d + 1, d + 1);

    std::vector<std::vector<double>> cols(d + 1);
    for (std::size_t j = 0; j < d; ++j) {
        cols[j].resize(table.X.rows);
        for (std::size_t i = 0; i < table.X.rows; ++i) cols[j][i] = table.X(i, j);
    }
    cols[d] = table.z;

    for (std::size_t a = 0; a <= d; ++a) {
        for (std::size_t b = 0; b <= d; ++b) {
            rep.full(a, b) = a == b ? 1.0 : pearson(cols[a], cols[b]);
        }
    }
    for (std::size_t j = 0; j < d; ++j) rep.r_with_depth.push_back(rep.full(j, d));
    return rep;
}

std::string CorrelationReport::to_csv() const {
    std::ostringstream out;
    out << "feature,r_with_depth\n";
    for (std::size_t j = 0; j < feature.size(); ++j) {
        out << feature[j] << ','
            << (std::isnan(r_with_depth[j]) ? "undefined" : format_double(r_with_depth[j]))
            << '\n';
    }
    return out.str();
}

namespace {

std::vector<double> forest_tree_importance(const Matrix& X, std::span<const double> y,
                                           const ForestConfig& cfg, std::uint64_t tree_seed) {
    Rng rng(tree_seed);
    const std::size_t n = X.rows;
    std::vector<std::size_t> bag(n);
    for (auto& b : bag) b = rng.below(n);

    TreeConfig tc;
    tc.max_depth = cfg.max_depth;
    tc.min_samples_leaf = cfg.min_samples_leaf;
    tc.max_features = cfg.max_features > 0
                          ? cfg.max_features
                          : std::max(1, static_cast<int>(std::lround(std::sqrt(
                                            static_cast<double>(X.cols)))));
    RegressionTree tree;
    std::vector<double> decrease;
    tree.fit(X, y, bag, tc, &rng, &decrease);
    double total = 0.0;
    for (double v : decrease) total += v;
    if (total > 0.0) {
        for (auto& v : decrease) v /= total;
    }
    return decrease;
}

ImportanceReport gini_common(const DepthTable& table, std::uint64_t seed,
                             const ForestConfig& cfg, bool parallel) {
    if (table.X.rows < 20) throw TooFewRows("gini_importance needs at least 20 rows");
    const std::size_t d = table.X.cols;
    std::vector<std::vector<double>> per_tree(cfg.n_trees);

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int t = 0; t < cfg.n_trees; ++t) {
            per_tree[t] = forest_tree_importance(
                table.X, table.z, cfg,
                mix_seed({seed, 0x91417ULL, static_cast<std::uint64_t>(t)}));
        }
    } else {
        for (int t = 0; t < cfg.n_trees; ++t) {
            per_tree[t] = forest_tree_importance(
                table.X, table.z, cfg,
                mix_seed({seed, 0x91417ULL, static_cast<std::uint64_t>(t)}));
        }
    }

    std::vector<double> mean(d, 0.0);
    for (const auto& imp : per_tree) {
        for (std::size_t j = 0; j < d; ++j) mean[j] += imp[j] / cfg.n_trees;
    }
    double total = 0.0;
    for (double v : mean) total += v;
    if (total > 0.0) {
        for (auto& v : mean) v /= total;
    }

    ImportanceReport rep;
    rep.feature = DepthFeatureRow::feature_names();
    rep.importance = mean;
    rep.ranking.resize(d);
    std::iota(rep.ranking.begin(), rep.ranking.end(), 0);
    std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                     [&](int a, int b) { return mean[a] > mean[b]; });
    return rep;
}

}  // namespace

ImportanceReport gini_importance(const DepthTable& table, std::uint64_t seed,
                                 const ForestConfig& cfg) {
    return gini_common(table, seed, cfg, true);
}

ImportanceReport gini_importance_serial(const DepthTable& table, std::uint64_t seed,
                                        const ForestConfig& cfg) {
    return gini_common(table, seed, cfg, false);
}

std::string ImportanceReport::to_csv() const {
    std::ostringstream out;
    out << "feature,importance\n";
    for (std::size_t j = 0; j < feature.size(); ++j) {
        out << feature[j] << ',' << format_double(importance[j]) << '\n';
    }
    return out.str();
}

DepthModelResult train_depth_model(const DepthTable& table, ModelKind kind, int cv_k,
                                   std::uint64_t seed, const ModelConfigs& cfg) {
    DepthModelResult result{kind, {}, {}};
    result.cv = cross_validate(
        [&](const Matrix& X, std::span<const double> y) { return fit_model(kind, X, y, cfg); },
        table.X, table.z, cv_k, seed, model_kind_name(kind));
    result.model = fit_model(kind, table.X, table.z, cfg);
    return result;
}

ModelKind select_best(const std::vector<CvReport>& reports,
                      const std::vector<ModelKind>& kinds) {
    if (reports.empty() || reports.size() != kinds.size()) {
        throw ConfigInvalid("select_best needs one report per model kind");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const auto& a = reports[i].mean;
        const auto& b = reports[best].mean;
        if (a.r2 > b.r2 || (a.r2 == b.r2 && a.mse < b.mse) ||
            (a.r2 == b.r2 && a.mse == b.mse &&
             static_cast<int>(kinds[i]) < static_cast<int>(kinds[best]))) {
            best = i;
        }
    }
    return kinds[best];
}

}  // namespace gaze3d
