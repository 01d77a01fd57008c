#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaze3d/geometry.hpp"
#include "gaze3d/landmarks.hpp"
#include "gaze3d/scene.hpp"
#include "gaze3d/vec.hpp"

namespace gaze3d {

enum class Eye { Left = 0, Right = 1 };

inline const char* eye_name(Eye e) { return e == Eye::Left ? "L" : "R"; }

// Eye-camera geometry shared by all synthetic subjects (1080p per eye).
constexpr double kEyeImageW = 1920.0;
constexpr double kEyeImageH = 1080.0;
constexpr double kEyeImageCx = 960.0;
constexpr double kEyeImageCy = 540.0;
// corneal glints move by this fraction of the pupil displacement
constexpr double kReflectionFollow = 0.1;
constexpr double kPupilPxPerMm = 20.0;
// gaze pointing further down than this direction-y triggers p/q occlusion
constexpr double kOcclusionDirY = -0.05;

struct SubjectParams {
    int id = 0;
    double ipd = 6.0;                 // cm
    double eyeball_radius = 1.2;      // cm
    double pupil_radius_base = 2.5;   // mm, radius at the nearest scene depth
    double pupil_depth_gain = 0.3;    // mm per log-unit of fixation depth
    double camera_scale = 8.0;        // pixels per degree of eye rotation
    std::array<Vec2, 8> eyelid_shape; // per-subject eyelid offsets, pixels
    Vec2 refl_m{-62.0, -20.0};        // reflection base positions, pixels
    Vec2 refl_n{62.0, -20.0};
    Vec2 refl_p{-62.0, 42.0};
    Vec2 refl_q{62.0, 42.0};

    Vec3 eye_center(Eye e) const {
        return {e == Eye::Left ? -ipd / 2.0 : ipd / 2.0, 0.0, 0.0};
    }
};

// Canonical subject (no jitter) and the seeded population used by sessions.
SubjectParams default_subject(int id);
std::vector<SubjectParams> make_subjects(int count, std::uint64_t seed);

struct NoiseSpec {
    double landmark_sigma = 0.0;      // pixels, isotropic gaussian
    double reflection_dropout = 0.0;  // P(p,q occluded) for downward gaze
    std::uint64_t seed = 0;
};

struct EyeFrame {
    int subject_id = 0;
    int point_id = 0;
    int plane_index = 0;
    Eye eye = Eye::Left;
    int frame_index = 0;  // timestamp index within the test point
    LandmarkSet landmarks;
    GazeRay true_gaze;    // origin = subject's pupil center
    Vec3 true_target;
};

struct Dataset {
    std::string scene_name;
    SceneSpec scene;
    std::vector<SubjectParams> subjects;
    NoiseSpec noise;
    int frames_per_point = 0;
    std::vector<EyeFrame> frames;

    const SubjectParams& subject(int id) const;
};

// Noise-free landmark rendering for one eye fixating `target`. The pupil
// center is displaced from the image center by camera_scale pixels per degree
// of gaze rotation; eyelid points are the subject's fixed offsets; glints sit
// at fixed base positions plus kReflectionFollow of the pupil displacement.
LandmarkSet render_landmarks(const SubjectParams& subject, Eye eye, const Vec3& target);

// yaw = horizontal rotation, pitch_down = downward rotation, both degrees
Vec2 gaze_angles(const Vec3& direction);
Vec3 direction_from_angles(double yaw_deg, double pitch_down_deg);

// Exact inverse of the rendering map: gaze direction from the pupil-center
// displacement. The verification oracle for the whole feature pipeline.
Vec3 gaze_from_landmarks(const SubjectParams& subject, const LandmarkSet& lm);

class Rng;

// Gaussian landmark noise plus the downward-gaze reflection dropout rule.
void apply_noise(LandmarkSet& lm, const Vec3& true_direction, const NoiseSpec& noise,
                 Rng& rng);

// One subject watching every test point of the scene, frames_per_point
// left/right pairs each. Deterministic: every frame derives its RNG stream
// from (seed, subject, point, frame), so the parallel and serial variants
// produce identical bytes.
Dataset generate_session(const SceneSpec& scene, const SubjectParams& subject,
                         const NoiseSpec& noise, int frames_per_point);
Dataset generate_session_serial(const SceneSpec& scene, const SubjectParams& subject,
                                const NoiseSpec& noise, int frames_per_point);

Dataset generate_sessions(const SceneSpec& scene, const std::vector<SubjectParams>& subjects,
                          const NoiseSpec& noise, int frames_per_point);

// CSV with one row per frame plus a JSON sidecar of subjects and noise spec.
std::string dataset_to_csv(const Dataset& ds);
std::string dataset_meta_to_json(const Dataset& ds);
Dataset dataset_from_files(const std::string& csv_path, const std::string& meta_path);

}  // namespace gaze3d
