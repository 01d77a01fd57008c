#include "gaze3d/synth.hpp"

#include <cmath>
#include <sstream>

#include "gaze3d/csv.hpp"
#include "gaze3d/errors.hpp"
#include "gaze3d/rng.hpp"
#include "json.hpp"

namespace gaze3d {

namespace {

const std::array<Vec2, 8> kEyelidCanonical = {{
    {-150.0, 0.0},   // a nasal corner
    {-105.0, -48.0}, // b
    {0.0, -66.0},    // c upper lid apex
    {105.0, -48.0},  // d
    {150.0, 0.0},    // e temporal corner
    {105.0, 48.0},   // f
    {0.0, 66.0},     // g lower lid apex
    {-105.0, 48.0},  // h
}};

constexpr double kPupilLawRefDepth = 15.0;  // cm, depth at which radius = base

double pupil_radius_px(const SubjectParams& s, double depth_cm) {
    double r_mm = s.pupil_radius_base - s.pupil_depth_gain * std::log(depth_cm / kPupilLawRefDepth);
    // keep the diameter inside the physiological 2..6 mm band
    r_mm = std::min(3.0, std::max(1.0, r_mm));
    return r_mm * kPupilPxPerMm;
}

}  // namespace

SubjectParams default_subject(int id) {
    SubjectParams s;
    s.id = id;
    s.eyelid_shape = kEyelidCanonical;
    return s;
}

std::vector<SubjectParams> make_subjects(int count, std::uint64_t seed) {
    std::vector<SubjectParams> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        Rng rng(mix_seed({seed, 0x5ab7ec7ULL, static_cast<std::uint64_t>(i)}));
        SubjectParams s = default_subject(i + 1);
        s.ipd = 6.0 + rng.uniform(-0.25, 0.25);
        s.eyeball_radius = 1.2 + rng.uniform(-0.05, 0.05);
        s.pupil_radius_base = 2.5 + rng.uniform(-0.35, 0.35);
        s.pupil_depth_gain = 0.3 + rng.uniform(-0.08, 0.08);
        s.camera_scale = 8.0 * (1.0 + rng.uniform(-0.22, 0.22));
        const double mag = s.camera_scale / 8.0;  // eyelid spread follows magnification
        for (int k = 0; k < 8; ++k) {
            s.eyelid_shape[k] = kEyelidCanonical[k] * (mag * (1.0 + rng.uniform(-0.05, 0.05)));
        }
        out.push_back(s);
    }
    return out;
}

const SubjectParams& Dataset::subject(int id) const {
    for (const auto& s : subjects) {
        if (s.id == id) return s;
    }
    throw MissingInput("unknown subject id in dataset: " + std::to_string(id));
}

Vec2 gaze_angles(const Vec3& direction) {
    return {deg_from_rad(std::atan2(direction.x, direction.z)),
            deg_from_rad(std::atan2(-direction.y, direction.z))};
}

Vec3 direction_from_angles(double yaw_deg, double pitch_down_deg) {
    const Vec3 d{std::tan(rad_from_deg(yaw_deg)), -std::tan(rad_from_deg(pitch_down_deg)), 1.0};
    return d.normalized();
}

LandmarkSet render_landmarks(const SubjectParams& subject, Eye eye, const Vec3& target) {
    if (!(target.z > 0.0)) {
        throw TargetBehindEyes("fixation target must lie in front of the eyes");
    }
    const Vec3 eye_center = subject.eye_center(eye);
    const Vec3 dir = (target - eye_center).normalized();
    const Vec2 angles = gaze_angles(dir);
    const Vec2 disp{subject.camera_scale * angles.x, subject.camera_scale * angles.y};

    LandmarkSet lm;
    lm.o = Vec2{kEyeImageCx, kEyeImageCy} + disp;
    for (int i = 0; i < 8; ++i) {
        lm.eyelid[i] = Vec2{kEyeImageCx, kEyeImageCy} + subject.eyelid_shape[i];
    }
    const Vec2 follow = disp * kReflectionFollow;
    const Vec2 center{kEyeImageCx, kEyeImageCy};
    lm.m = center + subject.refl_m + follow;
    lm.n = center + subject.refl_n + follow;
    lm.p = center + subject.refl_p + follow;
    lm.q = center + subject.refl_q + follow;
    lm.pupil_radius = pupil_radius_px(subject, target.z);
    return lm;
}

Vec3 gaze_from_landmarks(const SubjectParams& subject, const LandmarkSet& lm) {
    const double yaw = (lm.o.x - kEyeImageCx) / subject.camera_scale;
    const double pitch_down = (lm.o.y - kEyeImageCy) / subject.camera_scale;
    return direction_from_angles(yaw, pitch_down);
}

void apply_noise(LandmarkSet& lm, const Vec3& true_direction, const NoiseSpec& noise, Rng& rng) {
    auto jitter = [&](Vec2& p) {
        p.x += noise.landmark_sigma * rng.gaussian();
        p.y += noise.landmark_sigma * rng.gaussian();
    };
    jitter(lm.o);
    for (auto& p : lm.eyelid) jitter(p);
    jitter(lm.m);
    jitter(lm.n);
    if (lm.p) jitter(*lm.p);
    if (lm.q) jitter(*lm.q);
    // the upper eyelid can hide the lower glint pair when the user looks down
    const bool looking_down = true_direction.y < kOcclusionDirY;
    if (looking_down && rng.uniform() < noise.reflection_dropout) {
        lm.p.reset();
        lm.q.reset();
    }
}

namespace {

void make_frame_pair(const SceneSpec& scene, const SubjectParams& subject,
                     const NoiseSpec& noise, int point_idx, int frame_idx,
                     EyeFrame* out) {
    const TestPoint& tp = scene.test_points[point_idx];
    for (int e = 0; e < 2; ++e) {
        const Eye eye = static_cast<Eye>(e);
        EyeFrame& f = out[e];
        f.subject_id = subject.id;
        f.point_id = tp.id;
        f.plane_index = tp.plane_index;
        f.eye = eye;
        f.frame_index = frame_idx;
        f.true_target = tp.position;
        const Vec3 eye_center = subject.eye_center(eye);
        const Vec3 dir = (tp.position - eye_center).normalized();
        f.true_gaze = {eye_center + subject.eyeball_radius * dir, dir};
        f.landmarks = render_landmarks(subject, eye, tp.position);
        Rng rng(mix_seed({noise.seed, static_cast<std::uint64_t>(subject.id),
                          static_cast<std::uint64_t>(tp.id),
                          static_cast<std::uint64_t>(frame_idx),
                          static_cast<std::uint64_t>(e)}));
        apply_noise(f.landmarks, dir, noise, rng);
    }
}

Dataset session_common(const SceneSpec& scene, const SubjectParams& subject,
                       const NoiseSpec& noise, int frames_per_point, bool parallel) {
    if (frames_per_point < 1) {
        throw ConfigInvalid("frames_per_point must be >= 1");
    }
    for (const auto& tp : scene.test_points) {
        if (!(tp.position.z > 0.0)) {
            throw TargetBehindEyes("scene contains a target behind the eyes");
        }
    }
    Dataset ds;
    ds.scene_name = scene.name;
    ds.scene = scene;
    ds.subjects = {subject};
    ds.noise = noise;
    ds.frames_per_point = frames_per_point;
    const int n_points = static_cast<int>(scene.test_points.size());
    const int n_jobs = n_points * frames_per_point;
    ds.frames.resize(static_cast<std::size_t>(n_jobs) * 2);

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int job = 0; job < n_jobs; ++job) {
            make_frame_pair(scene, subject, noise, job / frames_per_point,
                            job % frames_per_point, &ds.frames[2 * job]);
        }
    } else {
        for (int job = 0; job < n_jobs; ++job) {
            make_frame_pair(scene, subject, noise, job / frames_per_point,
                            job % frames_per_point, &ds.frames[2 * job]);
        }
    }
    return ds;
}

}  // namespace

Dataset generate_session(const SceneSpec& scene, const SubjectParams& subject,
                         const NoiseSpec& noise, int frames_per_point) {
    return session_common(scene, subject, noise, frames_per_point, true);
}

Dataset generate_session_serial(const SceneSpec& scene, const SubjectParams& subject,
                                const NoiseSpec& noise, int frames_per_point) {
    return session_common(scene, subject, noise, frames_per_point, false);
}

Dataset generate_sessions(const SceneSpec& scene, const std::vector<SubjectParams>& subjects,
                          const NoiseSpec& noise, int frames_per_point) {
    Dataset all;
    all.scene_name = scene.name;
    all.scene = scene;
    all.subjects = subjects;
    all.noise = noise;
    all.frames_per_point = frames_per_point;
    for (const auto& s : subjects) {
        Dataset one = generate_session(scene, s, noise, frames_per_point);
        all.frames.insert(all.frames.end(), one.frames.begin(), one.frames.end());
    }
    return all;
}

std::string dataset_to_csv(const Dataset& ds) {
    std::ostringstream out;
    out << "subject_id,scene,point_id,plane_index,eye,frame_index";
    const char* lid = "abcdefgh";
    out << ",o_x,o_y";
    for (int i = 0; i < 8; ++i) out << ',' << lid[i] << "_x," << lid[i] << "_y";
    out << ",m_x,m_y,n_x,n_y,p_x,p_y,q_x,q_y,p_present,q_present,pupil_radius_px"
        << ",gaze_dir_x,gaze_dir_y,gaze_dir_z,target_x,target_y,target_z\n";
    auto put = [&](double v) { out << ',' << format_double(v); };
    for (const auto& f : ds.frames) {
        out << f.subject_id << ',' << ds.scene_name << ',' << f.point_id << ','
            << f.plane_index << ',' << eye_name(f.eye) << ',' << f.frame_index;
        put(f.landmarks.o.x);
        put(f.landmarks.o.y);
        for (const auto& p : f.landmarks.eyelid) {
            put(p.x);
            put(p.y);
        }
        put(f.landmarks.m.x);
        put(f.landmarks.m.y);
        put(f.landmarks.n.x);
        put(f.landmarks.n.y);
        put(f.landmarks.p ? f.landmarks.p->x : 0.0);
        put(f.landmarks.p ? f.landmarks.p->y : 0.0);
        put(f.landmarks.q ? f.landmarks.q->x : 0.0);
        put(f.landmarks.q ? f.landmarks.q->y : 0.0);
        out << ',' << (f.landmarks.p ? 1 : 0) << ',' << (f.landmarks.q ? 1 : 0);
        put(f.landmarks.pupil_radius);
        put(f.true_gaze.direction.x);
        put(f.true_gaze.direction.y);
        put(f.true_gaze.direction.z);
        put(f.true_target.x);
        put(f.true_target.y);
        put(f.true_target.z);
        out << '\n';
    }
    return out.str();
}

std::string dataset_meta_to_json(const Dataset& ds) {
    nlohmann::json j;
    j["scene"] = nlohmann::json::parse(scene_to_json(ds.scene));
    j["frames_per_point"] = ds.frames_per_point;
    j["noise"] = {{"landmark_sigma", ds.noise.landmark_sigma},
                  {"reflection_dropout", ds.noise.reflection_dropout},
                  {"seed", ds.noise.seed}};
    auto subs = nlohmann::json::array();
    for (const auto& s : ds.subjects) {
        nlohmann::json js;
        js["id"] = s.id;
        js["ipd"] = s.ipd;
        js["eyeball_radius"] = s.eyeball_radius;
        js["pupil_radius_base"] = s.pupil_radius_base;
        js["pupil_depth_gain"] = s.pupil_depth_gain;
        js["camera_scale"] = s.camera_scale;
        auto lids = nlohmann::json::array();
        for (const auto& p : s.eyelid_shape) lids.push_back({p.x, p.y});
        js["eyelid_shape"] = lids;
        js["refl"] = {{s.refl_m.x, s.refl_m.y},
                      {s.refl_n.x, s.refl_n.y},
                      {s.refl_p.x, s.refl_p.y},
                      {s.refl_q.x, s.refl_q.y}};
        subs.push_back(js);
    }
    j["subjects"] = subs;
    return j.dump(2) + "\n";
}

Dataset dataset_from_files(const std::string& csv_path, const std::string& meta_path) {
    Dataset ds;
    const auto meta = nlohmann::json::parse(read_text_file(meta_path));
    ds.scene = scene_from_json(meta.at("scene").dump());
    ds.scene_name = ds.scene.name;
    ds.frames_per_point = meta.at("frames_per_point").get<int>();
    ds.noise.landmark_sigma = meta.at("noise").at("landmark_sigma").get<double>();
    ds.noise.reflection_dropout = meta.at("noise").at("reflection_dropout").get<double>();
    ds.noise.seed = meta.at("noise").at("seed").get<std::uint64_t>();
    for (const auto& js : meta.at("subjects")) {
        SubjectParams s;
        s.id = js.at("id").get<int>();
        s.ipd = js.at("ipd").get<double>();
        s.eyeball_radius = js.at("eyeball_radius").get<double>();
        s.pupil_radius_base = js.at("pupil_radius_base").get<double>();
        s.pupil_depth_gain = js.at("pupil_depth_gain").get<double>();
        s.camera_scale = js.at("camera_scale").get<double>();
        for (int k = 0; k < 8; ++k) {
            s.eyelid_shape[k] = {js.at("eyelid_shape").at(k).at(0).get<double>(),
                                 js.at("eyelid_shape").at(k).at(1).get<double>()};
        }
        auto rp = [&](int k) {
            return Vec2{js.at("refl").at(k).at(0).get<double>(),
                        js.at("refl").at(k).at(1).get<double>()};
        };
        s.refl_m = rp(0);
        s.refl_n = rp(1);
        s.refl_p = rp(2);
        s.refl_q = rp(3);
        ds.subjects.push_back(s);
    }

    const CsvTable table = read_csv(csv_path);
    auto col = [&](const char* name) {
        const int c = table.column(name);
        if (c < 0) throw MissingInput(std::string("dataset CSV missing column ") + name);
        return c;
    };
    const int c_sub = col("subject_id"), c_pt = col("point_id"), c_pl = col("plane_index");
    const int c_eye = col("eye"), c_fr = col("frame_index");
    const int c_ox = col("o_x"), c_pp = col("p_present"), c_qp = col("q_present");
    const int c_pr = col("pupil_radius_px");
    const int c_gd = col("gaze_dir_x"), c_t = col("target_x");
    for (const auto& row : table.rows) {
        EyeFrame f;
        f.subject_id = std::stoi(row[c_sub]);
        f.point_id = std::stoi(row[c_pt]);
        f.plane_index = std::stoi(row[c_pl]);
        f.eye = row[c_eye] == "L" ? Eye::Left : Eye::Right;
        f.frame_index = std::stoi(row[c_fr]);
        auto num = [&](int c) { return std::stod(row[c]); };
        f.landmarks.o = {num(c_ox), num(c_ox + 1)};
        for (int k = 0; k < 8; ++k) {
            f.landmarks.eyelid[k] = {num(c_ox + 2 + 2 * k), num(c_ox + 3 + 2 * k)};
        }
        f.landmarks.m = {num(c_ox + 18), num(c_ox + 19)};
        f.landmarks.n = {num(c_ox + 20), num(c_ox + 21)};
        if (row[c_pp] == "1") f.landmarks.p = Vec2{num(c_ox + 22), num(c_ox + 23)};
        if (row[c_qp] == "1") f.landmarks.q = Vec2{num(c_ox + 24), num(c_ox + 25)};
        f.landmarks.pupil_radius = num(c_pr);
        const Vec3 dir{num(c_gd), num(c_gd + 1), num(c_gd + 2)};
        f.true_target = {num(c_t), num(c_t + 1), num(c_t + 2)};
        const SubjectParams& s = ds.subject(f.subject_id);
        f.true_gaze = {s.eye_center(f.eye) + s.eyeball_radius * dir, dir};
        ds.frames.push_back(f);
    }
    return ds;
}

}  // namespace gaze3d
