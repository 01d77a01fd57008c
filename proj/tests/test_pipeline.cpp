#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "gaze3d/csv.hpp"
#include "gaze3d/errors.hpp"
#include "gaze3d/pipeline.hpp"
#include "gaze3d/rng.hpp"

using namespace gaze3d;

namespace {

struct SmallWorld {
    SceneSpec scene = scene1_spec();
    SceneSpec calib = calibration_grid();
    std::vector<SubjectParams> subjects = make_subjects(8, 17);
    Dataset scene_ds;
    Dataset calib_ds;
    std::vector<int> train_ids, test_ids;

    explicit SmallWorld(double sigma = 0.0, int frames = 2) {
        const NoiseSpec noise{sigma, 0.0, 17};
        NoiseSpec calib_noise = noise;
        calib_noise.seed = mix_seed({noise.seed, 0xca11bULL});
        scene_ds = generate_sessions(scene, subjects, noise, frames);
        calib_ds = generate_sessions(calib, subjects, calib_noise, frames);
        split_subjects(dataset_subject_ids(scene_ds), &train_ids, &test_ids);
    }

    StackConfig config() const {
        StackConfig c;
        c.depth_model = "GBR";
        c.seed = 17;
        return c;
    }

    TrainedStack trained() const {
        return train(filter_subjects(scene_ds, train_ids),
                     filter_subjects(calib_ds, train_ids), config());
    }
};

}  // namespace

TEST_CASE("subject split follows the 5/6 rule") {
    std::vector<int> ids(30);
    for (int i = 0; i < 30; ++i) ids[i] = i + 1;
    std::vector<int> train_ids, test_ids;
    split_subjects(ids, &train_ids, &test_ids);
    CHECK(train_ids.size() == 25);
    CHECK(test_ids.size() == 5);
    CHECK(train_ids.front() == 1);
    CHECK(test_ids.back() == 30);

    std::vector<int> small{1, 2};
    split_subjects(small, &train_ids, &test_ids);
    CHECK(train_ids.size() == 1);
    CHECK(test_ids.size() == 1);
}

TEST_CASE("gaze SVR train error stays within a tenth of a degree") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    const Dataset strain = filter_subjects(w.scene_ds, w.train_ids);
    double mae = 0.0;
    int n = 0;
    for (const auto& f : strain.frames) {
        const auto feats = extract_features(f.landmarks).flatten();
        const int e = static_cast<int>(f.eye);
        const Vec2 pred{stack.gaze[e][0].predict(feats), stack.gaze[e][1].predict(feats)};
        // simulator-inverse oracle: the true rotation angles are exact
        const Vec2 truth = gaze_angles(f.true_gaze.direction);
        mae += std::hypot(pred.x - truth.x, pred.y - truth.y);
        ++n;
    }
    CHECK(mae / n <= 0.1);
}

TEST_CASE("subject profiles serialize and round trip") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    const int subject = w.test_ids.front();
    const SubjectProfile profile =
        calibrate_subject(stack, filter_subjects(w.calib_ds, {subject}), subject);
    const SubjectProfile back = profile_from_json(profile_to_json(profile));
    CHECK(back.subject_id == profile.subject_id);
    CHECK(back.poly[0].a == profile.poly[0].a);
    CHECK(back.poly[1].b == profile.poly[1].b);
    CHECK(back.psom.w == profile.psom.w);
}

TEST_CASE("training requires depth variation in the scene") {
    SmallWorld w;
    SceneSpec flat = w.scene;
    flat.test_points.clear();
    for (const auto& tp : w.scene.test_points) {
        if (tp.plane_index == 0) flat.test_points.push_back(tp);
    }
    const Dataset ds = generate_sessions(flat, w.subjects, {0.0, 0.0, 3}, 1);
    CHECK_THROWS_AS(train(ds, w.calib_ds, w.config()), InsufficientDepthVariation);
}

TEST_CASE("retraining with the same seed gives a byte-identical bundle") {
    SmallWorld w;
    const TrainedStack a = w.trained();
    const TrainedStack b = w.trained();
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "gaze3d_bundle_det";
    fs::remove_all(dir);
    save_stack(a, (dir / "a").string());
    save_stack(b, (dir / "b").string());
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const std::string name = entry.path().filename().string();
        CHECK(read_text_file((dir / "a" / name).string()) ==
              read_text_file((dir / "b" / name).string()));
    }
    fs::remove_all(dir);
}

TEST_CASE("bundle save/load round trip preserves behavior") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "gaze3d_bundle_rt";
    fs::remove_all(dir);
    save_stack(stack, dir.string());
    const TrainedStack back = load_stack(dir.string());
    CHECK(back.train_subjects == stack.train_subjects);
    CHECK(back.selected_depth == stack.selected_depth);

    const Dataset test_scene = filter_subjects(w.scene_ds, w.test_ids);
    const Dataset test_calib = filter_subjects(w.calib_ds, w.test_ids);
    const EvalReport r1 = evaluate(stack, test_scene, test_calib);
    const EvalReport r2 = evaluate(back, test_scene, test_calib);
    CHECK(r1.euclidean_3d_cm == doctest::Approx(r2.euclidean_3d_cm).epsilon(1e-12));
    CHECK(r1.post_2d_cm == doctest::Approx(r2.post_2d_cm).epsilon(1e-12));
    fs::remove_all(dir);

    CHECK_THROWS_AS(load_stack((dir / "missing").string()), MissingInput);
}

TEST_CASE("calibration reduces the 2D error for a held-out subject") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    const int subject = w.test_ids.front();
    const SubjectProfile profile =
        calibrate_subject(stack, filter_subjects(w.calib_ds, {subject}), subject);

    const Dataset test_scene = filter_subjects(w.scene_ds, {subject});
    const Dataset test_calib = filter_subjects(w.calib_ds, {subject});
    const EvalReport rep = evaluate(stack, test_scene, test_calib);
    CHECK(rep.post_2d_cm <= rep.pre_2d_cm);
    CHECK(profile.poly[0].fit_rms >= 0.0);
}

TEST_CASE("noisy calibration still reduces the marker error over seeds") {
    SmallWorld w(0.5);
    const TrainedStack stack = w.trained();
    int improved = 0;
    const int trials = 5;
    for (int t = 0; t < trials; ++t) {
        const int subject = w.test_ids.front();
        NoiseSpec noise{0.5, 0.0, 900 + static_cast<std::uint64_t>(t)};
        const Dataset calib =
            generate_session(w.calib, w.scene_ds.subject(subject), noise, 4);
        const EvalReport rep = evaluate(stack, calib, calib);
        if (rep.post_2d_cm < rep.pre_2d_cm) ++improved;
    }
    CHECK(improved >= 4);
}

TEST_CASE("calibrate_subject needs frames for both eyes") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    const int subject = w.test_ids.front();
    Dataset missing = filter_subjects(w.calib_ds, {subject});
    std::erase_if(missing.frames, [](const EyeFrame& f) { return f.eye == Eye::Right; });
    CHECK_THROWS_AS(calibrate_subject(stack, missing, subject), MissingInput);
}

TEST_CASE("inference is pure and accurate at the calibration markers") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    const int subject = w.test_ids.front();
    const Dataset calib = filter_subjects(w.calib_ds, {subject});
    const SubjectProfile profile = calibrate_subject(stack, calib, subject);
    const auto field =
        scene_disparity_field(w.calib, stack.config.binocular, stack.config.plane);

    int checked = 0;
    for (std::size_t i = 0; i + 1 < calib.frames.size(); i += 2) {
        const EyeFrame& l = calib.frames[i];
        const EyeFrame& r = calib.frames[i + 1];
        REQUIRE(l.eye == Eye::Left);
        InferIntermediates inter;
        const PoG3D a = infer(stack, profile, l, r, field, &inter);
        const PoG3D b = infer(stack, profile, l, r, field);
        CHECK(a.world.x == b.world.x);
        CHECK(a.world.y == b.world.y);
        CHECK(a.world.z == b.world.z);
        // the marker sits on the gaze plane, so PSOM output is directly
        // comparable with the marker position
        CHECK(std::abs(a.screen.x - l.true_target.x) < 0.1);
        CHECK(std::abs(a.screen.y - l.true_target.y) < 0.1);
        ++checked;
    }
    CHECK(checked == 18);
}

TEST_CASE("inference tolerates occluded p,q reflections") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    const int subject = w.test_ids.front();
    const Dataset calib = filter_subjects(w.calib_ds, {subject});
    const SubjectProfile profile = calibrate_subject(stack, calib, subject);
    const auto field =
        scene_disparity_field(w.scene, stack.config.binocular, stack.config.plane);

    Dataset scene = filter_subjects(w.scene_ds, {subject});
    EyeFrame l = scene.frames[0];
    EyeFrame r = scene.frames[1];
    const PoG3D with = infer(stack, profile, l, r, field);
    l.landmarks.p.reset();
    l.landmarks.q.reset();
    r.landmarks.p.reset();
    r.landmarks.q.reset();
    const PoG3D without = infer(stack, profile, l, r, field);
    CHECK(with.world.x == without.world.x);
    CHECK(with.world.z == without.world.z);
}

TEST_CASE("evaluate rejects subject overlap with the training set") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    const Dataset overlap = filter_subjects(w.scene_ds, {w.train_ids.front()});
    const Dataset calib = filter_subjects(w.calib_ds, {w.train_ids.front()});
    CHECK_THROWS_AS(evaluate(stack, overlap, calib), SubjectOverlap);
}

TEST_CASE("evaluate rejects data from a different scene") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    Dataset wrong = filter_subjects(w.scene_ds, w.test_ids);
    wrong.scene_name = "scene2";
    CHECK_THROWS_AS(
        evaluate(stack, wrong, filter_subjects(w.calib_ds, w.test_ids)), ConfigInvalid);
}

TEST_CASE("report aggregation: perfect predictions give zero error and R2 = 1") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    std::vector<SampleRecord> records;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        SampleRecord r;
        r.subject_id = 1;
        r.point_id = i % 9 + 1;
        r.plane_index = i % 4;
        r.z_true_scene = 15.0 + (i % 4) * 20.0;
        r.z_est_scene = r.z_true_scene;
        records.push_back(r);
    }
    const EvalReport rep = build_report(records, stack);
    CHECK(rep.x_err_cm == 0.0);
    CHECK(rep.y_err_cm == 0.0);
    CHECK(rep.z_err_cm == 0.0);
    CHECK(rep.euclidean_3d_cm == 0.0);
    CHECK(rep.depth_mae == 0.0);
    CHECK(rep.depth_r2 == doctest::Approx(1.0));
}

TEST_CASE("euclidean_3d recomputes exactly from its component columns") {
    SmallWorld w;
    const TrainedStack stack = w.trained();
    const EvalReport rep = evaluate(stack, filter_subjects(w.scene_ds, w.test_ids),
                                    filter_subjects(w.calib_ds, w.test_ids));
    const double recomputed = std::sqrt(rep.x_err_cm * rep.x_err_cm +
                                        rep.y_err_cm * rep.y_err_cm +
                                        rep.z_err_cm * rep.z_err_cm);
    CHECK(rep.euclidean_3d_cm == recomputed);
    CHECK(rep.n_samples > 0);

    // CSV shapes
    CHECK(rep.table3_csv().find("plane,x_error_cm,y_error_cm,samples\n") == 0);
    CHECK(rep.table33_csv().find("subject_id,point_id,") == 0);
    CHECK(rep.table4_csv().find("model,cv_mae,cv_mse,cv_r2,test_error_cm\n") == 0);
    CHECK(rep.summary_json().find("euclidean_cm") != std::string::npos);
}
