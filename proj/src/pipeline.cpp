#include "gaze3d/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "gaze3d/csv.hpp"
#include "gaze3d/errors.hpp"
#include "json.hpp"

namespace gaze3d {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNominalEyeballRadius = 1.2;  // cm, used for inference-side rays

struct FramePair {
    std::size_t left;
    std::size_t right;
};

std::vector<FramePair> collect_pairs(const Dataset& ds) {
    std::vector<FramePair> pairs;
    for (std::size_t i = 0; i + 1 < ds.frames.size(); ++i) {
        const EyeFrame& a = ds.frames[i];
        const EyeFrame& b = ds.frames[i + 1];
        if (a.eye == Eye::Left && b.eye == Eye::Right && a.subject_id == b.subject_id &&
            a.point_id == b.point_id && a.frame_index == b.frame_index) {
            pairs.push_back({i, i + 1});
            ++i;
        }
    }
    return pairs;
}

Vec2 predict_angles(const TrainedStack& stack, const EyeFrame& frame) {
    const auto feats = extract_features(frame.landmarks).flatten();
    const int e = static_cast<int>(frame.eye);
    return {stack.gaze[e][0].predict(feats), stack.gaze[e][1].predict(feats)};
}

GazeRay predicted_ray(const TrainedStack& stack, const EyeFrame& frame) {
    const Vec2 angles = predict_angles(stack, frame);
    const Vec3 dir = direction_from_angles(angles.x, angles.y);
    const Vec3 eye_center = frame.eye == Eye::Left ? stack.config.binocular.eye_left()
                                                   : stack.config.binocular.eye_right();
    return {eye_center + kNominalEyeballRadius * dir, dir};
}

Vec2 cyclopean_screen(const Vec3& target, const GazePlane& plane) {
    const double s = plane.distance / target.z;
    return {target.x * s, target.y * s};
}

}  // namespace

const AnyModel& TrainedStack::depth_model(ModelKind kind) const {
    for (std::size_t i = 0; i < depth_kinds.size(); ++i) {
        if (depth_kinds[i] == kind) return depth_models[i];
    }
    throw MissingInput(std::string("stack has no depth model of kind ") +
                       model_kind_name(kind));
}

std::vector<int> dataset_subject_ids(const Dataset& ds) {
    std::vector<int> ids;
    for (const auto& s : ds.subjects) ids.push_back(s.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

void split_subjects(const std::vector<int>& ids, std::vector<int>* train,
                    std::vector<int>* test) {
    if (ids.size() < 2) throw ConfigInvalid("need at least two subjects to split");
    std::size_t n_train = ids.size() * 5 / 6;
    n_train = std::max<std::size_t>(1, std::min(n_train, ids.size() - 1));
    train->assign(ids.begin(), ids.begin() + n_train);
    test->assign(ids.begin() + n_train, ids.end());
}

Dataset filter_subjects(const Dataset& ds, const std::vector<int>& keep) {
    const std::set<int> wanted(keep.begin(), keep.end());
    Dataset out;
    out.scene_name = ds.scene_name;
    out.scene = ds.scene;
    out.noise = ds.noise;
    out.frames_per_point = ds.frames_per_point;
    for (const auto& s : ds.subjects) {
        if (wanted.count(s.id)) out.subjects.push_back(s);
    }
    for (const auto& f : ds.frames) {
        if (wanted.count(f.subject_id)) out.frames.push_back(f);
    }
    return out;
}

namespace {

PolyMap2 fit_subject_polymap(const TrainedStack& stack, const Dataset& calib, int subject,
                             Eye eye) {
    std::vector<CalibrationPair> pairs;
    for (const auto& f : calib.frames) {
        if (f.subject_id != subject || f.eye != eye) continue;
        const GazeRay ray = predicted_ray(stack, f);
        const Vec2 raw = ray_plane_intersect(ray, stack.config.plane).cm;
        pairs.push_back({raw, {f.true_target.x, f.true_target.y}});
    }
    if (pairs.size() < 6) {
        throw MissingInput("calibration session lacks frames for one eye of subject " +
                           std::to_string(subject));
    }
    return fit_poly_calibration(pairs);
}

}  // namespace

SubjectProfile calibrate_subject(const TrainedStack& stack, const Dataset& calib_data,
                                 int subject_id) {
    SubjectProfile profile;
    profile.subject_id = subject_id;
    profile.poly[0] = fit_subject_polymap(stack, calib_data, subject_id, Eye::Left);
    profile.poly[1] = fit_subject_polymap(stack, calib_data, subject_id, Eye::Right);

    // PSOM reference vectors: mean calibrated binocular gaze per marker
    struct Acc {
        double v[4] = {0, 0, 0, 0};
        int n = 0;
        Vec2 marker;
    };
    std::map<int, Acc> acc;
    const auto pairs = collect_pairs(calib_data);
    for (const auto& pr : pairs) {
        const EyeFrame& l = calib_data.frames[pr.left];
        const EyeFrame& r = calib_data.frames[pr.right];
        if (l.subject_id != subject_id) continue;
        const Vec2 raw_l = ray_plane_intersect(predicted_ray(stack, l), stack.config.plane).cm;
        const Vec2 raw_r = ray_plane_intersect(predicted_ray(stack, r), stack.config.plane).cm;
        const Vec2 cal_l = profile.poly[0].apply(raw_l);
        const Vec2 cal_r = profile.poly[1].apply(raw_r);
        Acc& a = acc[l.point_id];
        a.v[0] += cal_l.x;
        a.v[1] += cal_l.y;
        a.v[2] += cal_r.x;
        a.v[3] += cal_r.y;
        a.n += 1;
        a.marker = {l.true_target.x, l.true_target.y};
    }
    std::vector<PsomNode> nodes;
    for (auto& [id, a] : acc) {
        PsomNode node;
        node.grid = a.marker;
        for (int c = 0; c < 4; ++c) node.ref[c] = a.v[c] / a.n;
        nodes.push_back(node);
    }
    profile.psom = psom_calibrate(nodes);
    return profile;
}

std::string profile_to_json(const SubjectProfile& profile) {
    json j;
    j["subject_id"] = profile.subject_id;
    j["poly_left"] = json::parse(polymap_to_json(profile.poly[0]));
    j["poly_right"] = json::parse(polymap_to_json(profile.poly[1]));
    j["psom"] = json::parse(psom_to_json(profile.psom));
    return j.dump(2) + "\n";
}

SubjectProfile profile_from_json(const std::string& text) {
    const json j = json::parse(text);
    SubjectProfile p;
    p.subject_id = j.at("subject_id").get<int>();
    p.poly[0] = polymap_from_json(j.at("poly_left").dump());
    p.poly[1] = polymap_from_json(j.at("poly_right").dump());
    p.psom = psom_from_json(j.at("psom").dump());
    return p;
}

TrainedStack train(const Dataset& scene_data, const Dataset& calib_data,
                   const StackConfig& config) {
    if (scene_data.scene.plane_depths().size() < 2) {
        throw InsufficientDepthVariation(
            "depth regression needs test points on at least two depth planes");
    }

    TrainedStack stack;
    stack.config = config;
    stack.scene_name = scene_data.scene_name;
    stack.depth_unit_name = scene_data.scene.depth_unit_name;
    stack.depth_unit_cm = scene_data.scene.depth_unit_cm;
    stack.train_subjects = dataset_subject_ids(scene_data);

    // gaze SVRs: one per (eye, rotation component). The labeled calibration
    // session joins the training set so the regressor covers the full
    // angular range of the marker grid, not just the scene's envelope.
    for (int e = 0; e < 2; ++e) {
        Matrix X(0, FeatureVector13::kFlatLength);
        std::vector<double> yaw, pitch;
        for (const Dataset* ds : {&scene_data, &calib_data}) {
            for (const auto& f : ds->frames) {
                if (static_cast<int>(f.eye) != e) continue;
                X.push_row(extract_features(f.landmarks).flatten());
                const Vec2 angles = gaze_angles(f.true_gaze.direction);
                yaw.push_back(angles.x);
                pitch.push_back(angles.y);
            }
        }
        stack.gaze[e][0] = svr_fit(X, yaw, config.gaze_svr);
        stack.gaze[e][1] = svr_fit(X, pitch, config.gaze_svr);
    }

    // per-train-subject calibration, then the measured depth feature table
    std::map<int, SubjectProfile> profiles;
    for (int id : stack.train_subjects) {
        profiles[id] = calibrate_subject(stack, calib_data, id);
    }
    const DisparityField disparity =
        scene_disparity_field(scene_data.scene, config.binocular, config.plane);

    DepthTable table;
    table.unit_name = stack.depth_unit_name;
    table.X = Matrix(0, DepthFeatureRow::kFeatureCount);
    const auto pairs = collect_pairs(scene_data);
    for (const auto& pr : pairs) {
        const EyeFrame& l = scene_data.frames[pr.left];
        const EyeFrame& r = scene_data.frames[pr.right];
        const SubjectProfile& prof = profiles.at(l.subject_id);
        const GazeRay ray_l = predicted_ray(stack, l);
        const GazeRay ray_r = predicted_ray(stack, r);
        const Vec2 cal_l = prof.poly[0].apply(ray_plane_intersect(ray_l, config.plane).cm);
        const Vec2 cal_r = prof.poly[1].apply(ray_plane_intersect(ray_r, config.plane).cm);
        const DepthFeatureRow row = build_depth_features(
            ray_l, ray_r, cal_l, cal_r, l.landmarks, r.landmarks, disparity,
            l.true_target.z / scene_data.scene.depth_unit_cm);
        table.X.push_row(row.features());
        table.z.push_back(row.z);
        table.subject_id.push_back(l.subject_id);
        table.plane_index.push_back(l.plane_index);
    }

    const bool all = config.depth_model == "all";
    std::vector<ModelKind> kinds;
    if (all) {
        kinds.assign(std::begin(kAllModelKinds), std::end(kAllModelKinds));
    } else {
        kinds.push_back(model_kind_from_name(config.depth_model));
    }
    for (ModelKind k : kinds) {
        DepthModelResult res =
            train_depth_model(table, k, config.cv_folds, config.seed, config.depth_configs);
        stack.depth_kinds.push_back(k);
        stack.depth_models.push_back(std::move(res.model));
        stack.depth_cv.push_back(std::move(res.cv));
    }
    stack.selected_depth = all ? select_best(stack.depth_cv, stack.depth_kinds) : kinds[0];
    return stack;
}

PoG3D infer(const TrainedStack& stack, const SubjectProfile& profile,
            const EyeFrame& left, const EyeFrame& right,
            const DisparityField& disparity, InferIntermediates* inter) {
    const GazePlane& plane = stack.config.plane;
    const GazeRay ray_l = predicted_ray(stack, left);
    const GazeRay ray_r = predicted_ray(stack, right);
    const Vec2 raw_l = ray_plane_intersect(ray_l, plane).cm;
    const Vec2 raw_r = ray_plane_intersect(ray_r, plane).cm;
    const Vec2 cal_l = profile.poly[0].apply(raw_l);
    const Vec2 cal_r = profile.poly[1].apply(raw_r);

    const InversionResult inv =
        psom_invert(profile.psom, {cal_l.x, cal_l.y, cal_r.x, cal_r.y}, stack.config.inversion);

    const DepthFeatureRow row = build_depth_features(
        ray_l, ray_r, cal_l, cal_r, left.landmarks, right.landmarks, disparity, 0.0);
    const double z_scene =
        stack.depth_model(stack.selected_depth).predict(row.features());
    const double z_cm = z_scene * stack.depth_unit_cm;

    PoG3D out;
    out.screen = inv.s;
    out.depth_scene_units = z_scene;
    // back-project the on-plane estimate along the cyclopean sight-line
    out.world = {inv.s.x * z_cm / plane.distance, inv.s.y * z_cm / plane.distance, z_cm};

    if (inter) {
        inter->ray[0] = ray_l;
        inter->ray[1] = ray_r;
        inter->raw_2d[0] = raw_l;
        inter->raw_2d[1] = raw_r;
        inter->cal_2d[0] = cal_l;
        inter->cal_2d[1] = cal_r;
        inter->depth_row = row;
        inter->psom_converged = inv.converged;
        inter->psom_extrapolated = inv.extrapolated;
    }
    return out;
}

EvalReport build_report(const std::vector<SampleRecord>& records,
                        const TrainedStack& stack) {
    EvalReport rep;
    rep.scene_name = stack.scene_name;
    rep.depth_unit_name = stack.depth_unit_name;
    rep.n_samples = static_cast<int>(records.size());
    if (records.empty()) return rep;

    std::map<int, PlaneError> planes;
    std::map<std::pair<int, int>, PointError> points;
    double z_mean = 0.0;
    for (const auto& r : records) z_mean += r.z_true_scene / records.size();
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& r : records) {
        rep.pre_2d_cm += r.pre_2d_cm;
        rep.post_2d_cm += r.post_2d_cm;
        rep.x_err_cm += r.x_err_cm;
        rep.y_err_cm += r.y_err_cm;
        rep.z_err_cm += r.z_err_cm;
        const double ez = r.z_est_scene - r.z_true_scene;
        rep.depth_mae += std::abs(ez);
        rep.depth_mse += ez * ez;
        ss_res += ez * ez;
        ss_tot += (r.z_true_scene - z_mean) * (r.z_true_scene - z_mean);
        if (!r.psom_converged) ++rep.n_psom_nonconverged;

        PlaneError& pe = planes[r.plane_index];
        pe.plane_index = r.plane_index;
        pe.x_err += r.x_err_cm;
        pe.y_err += r.y_err_cm;
        pe.count += 1;
        PointError& pt = points[{r.subject_id, r.point_id}];
        pt.subject_id = r.subject_id;
        pt.point_id = r.point_id;
        pt.x_err += r.x_err_cm;
        pt.y_err += r.y_err_cm;
        pt.count += 1;
    }
    const double n = records.size();
    rep.pre_2d_cm /= n;
    rep.post_2d_cm /= n;
    rep.x_err_cm /= n;
    rep.y_err_cm /= n;
    rep.z_err_cm /= n;
    rep.depth_mae /= n;
    rep.depth_mse /= n;
    rep.depth_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    rep.euclidean_3d_cm = std::sqrt(rep.x_err_cm * rep.x_err_cm +
                                    rep.y_err_cm * rep.y_err_cm +
                                    rep.z_err_cm * rep.z_err_cm);
    const double ref = stack.config.angular_reference_cm;
    rep.pre_2d_deg = deg_from_rad(std::atan(rep.pre_2d_cm / ref));
    rep.post_2d_deg = deg_from_rad(std::atan(rep.post_2d_cm / ref));

    for (auto& [idx, pe] : planes) {
        pe.x_err /= pe.count;
        pe.y_err /= pe.count;
        rep.per_plane.push_back(pe);
    }
    for (auto& [key, pt] : points) {
        pt.x_err /= pt.count;
        pt.y_err /= pt.count;
        rep.per_point.push_back(pt);
    }
    for (std::size_t i = 0; i < stack.depth_kinds.size(); ++i) {
        EvalReport::ModelRow row;
        row.name = model_kind_name(stack.depth_kinds[i]);
        row.cv_mae = stack.depth_cv[i].mean.mae;
        row.cv_mse = stack.depth_cv[i].mean.mse;
        row.cv_r2 = stack.depth_cv[i].mean.r2;
        rep.models.push_back(row);
    }
    return rep;
}

EvalReport evaluate(const TrainedStack& stack, const Dataset& scene_data,
                    const Dataset& calib_data, std::vector<SampleRecord>* records_out) {
    if (scene_data.scene_name != stack.scene_name) {
        throw ConfigInvalid("stack was trained on " + stack.scene_name +
                            " but the evaluation data is " + scene_data.scene_name);
    }
    const std::set<int> trained(stack.train_subjects.begin(), stack.train_subjects.end());
    for (int id : dataset_subject_ids(scene_data)) {
        if (trained.count(id)) {
            throw SubjectOverlap("test subject " + std::to_string(id) +
                                 " appears in the training set");
        }
    }

    std::map<int, SubjectProfile> profiles;
    for (int id : dataset_subject_ids(scene_data)) {
        profiles[id] = calibrate_subject(stack, calib_data, id);
    }
    const DisparityField disparity =
        scene_disparity_field(scene_data.scene, stack.config.binocular, stack.config.plane);
    const GazePlane& plane = stack.config.plane;

    const auto pairs = collect_pairs(scene_data);
    std::vector<SampleRecord> records(pairs.size());
    Matrix model_err(pairs.size(), stack.depth_models.size());

#pragma omp parallel for schedule(static)
    for (int k = 0; k < static_cast<int>(pairs.size()); ++k) {
        const EyeFrame& l = scene_data.frames[pairs[k].left];
        const EyeFrame& r = scene_data.frames[pairs[k].right];
        InferIntermediates inter;
        const PoG3D est = infer(stack, profiles.at(l.subject_id), l, r, disparity, &inter);

        SampleRecord rec;
        rec.subject_id = l.subject_id;
        rec.point_id = l.point_id;
        rec.plane_index = l.plane_index;
        const Vec2 truth_l = ray_plane_intersect(l.true_gaze, plane).cm;
        const Vec2 truth_r = ray_plane_intersect(r.true_gaze, plane).cm;
        rec.pre_2d_cm = 0.5 * ((inter.raw_2d[0] - truth_l).norm() +
                               (inter.raw_2d[1] - truth_r).norm());
        rec.post_2d_cm = 0.5 * ((inter.cal_2d[0] - truth_l).norm() +
                                (inter.cal_2d[1] - truth_r).norm());
        const Vec2 screen_truth = cyclopean_screen(l.true_target, plane);
        const double back = l.true_target.z / plane.distance;
        rec.x_err_cm = std::abs(est.screen.x - screen_truth.x) * back;
        rec.y_err_cm = std::abs(est.screen.y - screen_truth.y) * back;
        rec.z_true_scene = l.true_target.z / stack.depth_unit_cm;
        rec.z_est_scene = est.depth_scene_units;
        rec.z_err_cm = std::abs(est.world.z - l.true_target.z);
        rec.psom_converged = inter.psom_converged;
        records[k] = rec;

        for (std::size_t m = 0; m < stack.depth_models.size(); ++m) {
            const double zm = stack.depth_models[m].predict(inter.depth_row.features());
            model_err(k, m) = std::abs(zm - rec.z_true_scene);
        }
    }

    EvalReport rep = build_report(records, stack);
    for (std::size_t m = 0; m < stack.depth_models.size(); ++m) {
        double s = 0.0;
        for (std::size_t k = 0; k < pairs.size(); ++k) s += model_err(k, m);
        rep.models[m].test_error = pairs.empty() ? 0.0 : s / pairs.size();
    }
    if (records_out) *records_out = std::move(records);
    return rep;
}

std::string EvalReport::table3_csv() const {
    std::ostringstream out;
    out << "plane,x_error_cm,y_error_cm,samples\n";
    for (const auto& p : per_plane) {
        out << "plane" << (p.plane_index + 1) << ',' << format_double(p.x_err) << ','
            << format_double(p.y_err) << ',' << p.count << '\n';
    }
    out << "average," << format_double(x_err_cm) << ',' << format_double(y_err_cm) << ','
        << n_samples << '\n';
    return out.str();
}

std::string EvalReport::table33_csv() const {
    std::ostringstream out;
    out << "subject_id,point_id,x_error_cm,y_error_cm,samples\n";
    for (const auto& p : per_point) {
        out << p.subject_id << ',' << p.point_id << ',' << format_double(p.x_err) << ','
            << format_double(p.y_err) << ',' << p.count << '\n';
    }
    return out.str();
}

std::string EvalReport::table4_csv() const {
    std::ostringstream out;
    out << "model,cv_mae,cv_mse,cv_r2,test_error_" << depth_unit_name << '\n';
    for (const auto& m : models) {
        out << m.name << ',' << format_double(m.cv_mae) << ',' << format_double(m.cv_mse)
            << ',' << format_double(m.cv_r2) << ',' << format_double(m.test_error) << '\n';
    }
    return out.str();
}

std::string EvalReport::summary_json() const {
    json j;
    j["scene"] = scene_name;
    j["n_samples"] = n_samples;
    j["psom_nonconverged"] = n_psom_nonconverged;
    j["gaze_2d"] = {{"pre_cm", pre_2d_cm},
                    {"pre_deg", pre_2d_deg},
                    {"post_cm", post_2d_cm},
                    {"post_deg", post_2d_deg}};
    j["pog_3d"] = {{"x_err_cm", x_err_cm},
                   {"y_err_cm", y_err_cm},
                   {"z_err_cm", z_err_cm},
                   {"euclidean_cm", euclidean_3d_cm}};
    j["depth"] = {{"unit", depth_unit_name},
                  {"mae", depth_mae},
                  {"mse", depth_mse},
                  {"r2", depth_r2}};
    return j.dump(2) + "\n";
}

namespace {

json plane_to_json(const GazePlane& p) {
    return {{"distance", p.distance}, {"width", p.width},     {"height", p.height},
            {"res_u", p.res_u},       {"res_v", p.res_v},     {"pixels_per_cm", p.pixels_per_cm}};
}

GazePlane plane_from_json(const json& j) {
    GazePlane p;
    p.distance = j.at("distance").get<double>();
    p.width = j.at("width").get<double>();
    p.height = j.at("height").get<double>();
    p.res_u = j.at("res_u").get<int>();
    p.res_v = j.at("res_v").get<int>();
    p.pixels_per_cm = j.at("pixels_per_cm").get<double>();
    return p;
}

json svr_config_to_json(const SvrConfig& c) {
    return {{"C", c.C},
            {"epsilon_tube", c.epsilon_tube},
            {"kernel", c.kernel.type == KernelSpec::Type::Rbf ? "rbf" : "linear"},
            {"sigma", c.kernel.sigma},
            {"max_iter", c.max_iter},
            {"tol", c.tol}};
}

SvrConfig svr_config_from_json(const json& j) {
    SvrConfig c;
    c.C = j.at("C").get<double>();
    c.epsilon_tube = j.at("epsilon_tube").get<double>();
    c.kernel.type = j.at("kernel").get<std::string>() == "rbf" ? KernelSpec::Type::Rbf
                                                               : KernelSpec::Type::Linear;
    c.kernel.sigma = j.at("sigma").get<double>();
    c.max_iter = j.at("max_iter").get<int>();
    c.tol = j.at("tol").get<double>();
    return c;
}

json cv_report_to_json(const CvReport& r) {
    json folds = json::array();
    for (const auto& f : r.folds) folds.push_back({f.mae, f.mse, f.r2});
    return {{"model", r.model_name}, {"seed", r.seed},
            {"k", r.k},              {"folds", folds},
            {"mean", {r.mean.mae, r.mean.mse, r.mean.r2}}};
}

CvReport cv_report_from_json(const json& j) {
    CvReport r;
    r.model_name = j.at("model").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.k = j.at("k").get<int>();
    for (const auto& f : j.at("folds")) {
        r.folds.push_back({f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()});
    }
    r.mean = {j.at("mean").at(0).get<double>(), j.at("mean").at(1).get<double>(),
              j.at("mean").at(2).get<double>()};
    return r;
}

}  // namespace

void save_stack(const TrainedStack& stack, const std::string& dir) {
    fs::create_directories(dir);
    json j;
    j["config"] = {
        {"binocular",
         {{"ipd", stack.config.binocular.interpupillary_distance},
          {"zero_parallax_depth", stack.config.binocular.zero_parallax_depth}}},
        {"plane", plane_to_json(stack.config.plane)},
        {"gaze_svr", svr_config_to_json(stack.config.gaze_svr)},
        {"depth_model", stack.config.depth_model},
        {"cv_folds", stack.config.cv_folds},
        {"seed", stack.config.seed},
        {"angular_reference_cm", stack.config.angular_reference_cm}};
    j["scene_name"] = stack.scene_name;
    j["depth_unit_name"] = stack.depth_unit_name;
    j["depth_unit_cm"] = stack.depth_unit_cm;
    j["train_subjects"] = stack.train_subjects;
    j["selected_depth"] = model_kind_name(stack.selected_depth);
    json kinds = json::array();
    for (ModelKind k : stack.depth_kinds) kinds.push_back(model_kind_name(k));
    j["depth_kinds"] = kinds;
    json cvs = json::array();
    for (const auto& r : stack.depth_cv) cvs.push_back(cv_report_to_json(r));
    j["depth_cv"] = cvs;
    write_text_file(dir + "/stack.json", j.dump(2) + "\n");

    const char* eyes[2] = {"L", "R"};
    const char* comps[2] = {"yaw", "pitch"};
    for (int e = 0; e < 2; ++e) {
        for (int c = 0; c < 2; ++c) {
            write_text_file(dir + "/gaze_" + eyes[e] + "_" + comps[c] + ".json",
                            AnyModel{stack.gaze[e][c]}.to_json() + "\n");
        }
    }
    for (std::size_t i = 0; i < stack.depth_kinds.size(); ++i) {
        write_text_file(dir + "/depth_" +
                            std::string(model_kind_name(stack.depth_kinds[i])) + ".json",
                        stack.depth_models[i].to_json() + "\n");
    }
}

TrainedStack load_stack(const std::string& dir) {
    if (!fs::exists(dir + "/stack.json")) {
        throw MissingInput("model bundle not found: " + dir +
                           " (expected stack.json; run the train command first)");
    }
    const json j = json::parse(read_text_file(dir + "/stack.json"));
    TrainedStack stack;
    const json& c = j.at("config");
    stack.config.binocular.interpupillary_distance = c.at("binocular").at("ipd").get<double>();
    stack.config.binocular.zero_parallax_depth =
        c.at("binocular").at("zero_parallax_depth").get<double>();
    stack.config.plane = plane_from_json(c.at("plane"));
    stack.config.gaze_svr = svr_config_from_json(c.at("gaze_svr"));
    stack.config.depth_model = c.at("depth_model").get<std::string>();
    stack.config.cv_folds = c.at("cv_folds").get<int>();
    stack.config.seed = c.at("seed").get<std::uint64_t>();
    stack.config.angular_reference_cm = c.at("angular_reference_cm").get<double>();
    stack.scene_name = j.at("scene_name").get<std::string>();
    stack.depth_unit_name = j.at("depth_unit_name").get<std::string>();
    stack.depth_unit_cm = j.at("depth_unit_cm").get<double>();
    stack.train_subjects = j.at("train_subjects").get<std::vector<int>>();
    stack.selected_depth = model_kind_from_name(j.at("selected_depth").get<std::string>());
    for (const auto& r : j.at("depth_cv")) stack.depth_cv.push_back(cv_report_from_json(r));

    const char* eyes[2] = {"L", "R"};
    const char* comps[2] = {"yaw", "pitch"};
    for (int e = 0; e < 2; ++e) {
        for (int c2 = 0; c2 < 2; ++c2) {
            const AnyModel m = AnyModel::from_json(
                read_text_file(dir + "/gaze_" + eyes[e] + "_" + comps[c2] + ".json"));
            stack.gaze[e][c2] = std::get<SvrModel>(m.storage());
        }
    }
    for (const auto& kname : j.at("depth_kinds")) {
        const ModelKind k = model_kind_from_name(kname.get<std::string>());
        stack.depth_kinds.push_back(k);
        stack.depth_models.push_back(AnyModel::from_json(
            read_text_file(dir + "/depth_" + std::string(model_kind_name(k)) + ".json")));
    }
    return stack;
}

}  // namespace gaze3d
