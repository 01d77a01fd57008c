#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gaze3d/calibration.hpp"
#include "gaze3d/cross_validation.hpp"
#include "gaze3d/depth.hpp"
#include "gaze3d/psom.hpp"
#include "gaze3d/regressor.hpp"
#include "gaze3d/scene.hpp"
#include "gaze3d/svr.hpp"
#include "gaze3d/synth.hpp"

namespace gaze3d {

struct StackConfig {
    BinocularConfig binocular;
    GazePlane plane;
    // gaze-direction SVR; tighter than the depth-comparison defaults because
    // it has to resolve fractions of a degree across the subject population
    SvrConfig gaze_svr{50.0, 0.05, {KernelSpec::Type::Rbf, 2.9}, 300000, 1e-3};
    ModelConfigs depth_configs;
    std::string depth_model = "GBR";  // one of the five kinds, or "all"
    int cv_folds = 5;
    std::uint64_t seed = 0;
    // distance used to convert 2D gaze error from cm to degrees
    double angular_reference_cm = 59.0;
    InversionConfig inversion;
};

// Shared trained components: four gaze SVRs (eye x yaw/pitch) and the gaze
// depth regressor(s).
struct TrainedStack {
    StackConfig config;
    SvrModel gaze[2][2];  // [eye][0 = yaw, 1 = pitch]
    std::vector<ModelKind> depth_kinds;
    std::vector<AnyModel> depth_models;
    std::vector<CvReport> depth_cv;
    ModelKind selected_depth = ModelKind::GBR;
    std::vector<int> train_subjects;
    std::string scene_name;
    std::string depth_unit_name = "cm";
    double depth_unit_cm = 1.0;

    const AnyModel& depth_model(ModelKind kind) const;
};

struct SubjectProfile {
    int subject_id = 0;
    PolyMap2 poly[2];  // left, right
    PsomNet psom;
};

std::string profile_to_json(const SubjectProfile& profile);
SubjectProfile profile_from_json(const std::string& text);

struct PoG3D {
    Vec3 world;              // (X, Y, Z) cm
    Vec2 screen;             // PSOM output on the gaze plane, cm
    double depth_scene_units = 0.0;
};

struct InferIntermediates {
    GazeRay ray[2];
    Vec2 raw_2d[2];
    Vec2 cal_2d[2];
    DepthFeatureRow depth_row;
    bool psom_converged = true;
    bool psom_extrapolated = false;
};

std::vector<int> dataset_subject_ids(const Dataset& ds);
// leading 5/6 of the subjects train, the rest test (at least one of each)
void split_subjects(const std::vector<int>& ids, std::vector<int>* train,
                    std::vector<int>* test);
Dataset filter_subjects(const Dataset& ds, const std::vector<int>& keep);

// Gaze SVRs from the scene session, per-train-subject polynomial calibration
// from the calibration session, then depth model(s) on the measured feature
// table the calibrated stack produces.
TrainedStack train(const Dataset& scene_data, const Dataset& calib_data,
                   const StackConfig& config);

SubjectProfile calibrate_subject(const TrainedStack& stack, const Dataset& calib_data,
                                 int subject_id);

PoG3D infer(const TrainedStack& stack, const SubjectProfile& profile,
            const EyeFrame& left, const EyeFrame& right,
            const DisparityField& disparity, InferIntermediates* inter = nullptr);

// one evaluated frame pair
struct SampleRecord {
    int subject_id = 0;
    int point_id = 0;
    int plane_index = 0;
    double pre_2d_cm = 0.0;   // mean over both eyes, raw gaze vs true gaze
    double post_2d_cm = 0.0;  // after polynomial calibration
    double x_err_cm = 0.0;    // lateral world error at the true depth
    double y_err_cm = 0.0;
    double z_err_cm = 0.0;
    double z_true_scene = 0.0;
    double z_est_scene = 0.0;
    bool psom_converged = true;
};

struct PlaneError {
    int plane_index = 0;
    double x_err = 0.0;
    double y_err = 0.0;
    int count = 0;
};

struct PointError {
    int subject_id = 0;
    int point_id = 0;
    double x_err = 0.0;
    double y_err = 0.0;
    int count = 0;
};

struct EvalReport {
    std::string scene_name;
    std::string depth_unit_name = "cm";
    int n_samples = 0;
    int n_psom_nonconverged = 0;
    double pre_2d_cm = 0.0, pre_2d_deg = 0.0;
    double post_2d_cm = 0.0, post_2d_deg = 0.0;
    double x_err_cm = 0.0, y_err_cm = 0.0, z_err_cm = 0.0;
    double euclidean_3d_cm = 0.0;  // sqrt(x^2 + y^2 + z^2) of the mean abs errors
    double depth_mae = 0.0, depth_mse = 0.0, depth_r2 = 0.0;  // scene units
    std::vector<PlaneError> per_plane;
    std::vector<PointError> per_point;
    // per-model CV metrics (from training) plus test-set depth error
    struct ModelRow {
        std::string name;
        double cv_mae = 0.0, cv_mse = 0.0, cv_r2 = 0.0;
        double test_error = 0.0;  // mean abs depth error, scene units
    };
    std::vector<ModelRow> models;

    std::string table3_csv() const;   // per-plane x/y error
    std::string table33_csv() const;  // per subject x point error
    std::string table4_csv() const;   // model comparison
    std::string summary_json() const;
};

EvalReport build_report(const std::vector<SampleRecord>& records,
                        const TrainedStack& stack);

EvalReport evaluate(const TrainedStack& stack, const Dataset& scene_data,
                    const Dataset& calib_data,
                    std::vector<SampleRecord>* records_out = nullptr);

// model bundle directory (one JSON per component plus a manifest)
void save_stack(const TrainedStack& stack, const std::string& dir);
TrainedStack load_stack(const std::string& dir);

}  // namespace gaze3d
