// Command-line front end: synth | train | eval | corr | report.
// Every command owns its output directory (lockfile) and writes a manifest
// with the config echo and content hashes of all produced files.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gaze3d/csv.hpp"
#include "gaze3d/depth.hpp"
#include "gaze3d/errors.hpp"
#include "gaze3d/manifest.hpp"
#include "gaze3d/pipeline.hpp"
#include "gaze3d/rng.hpp"
#include "gaze3d/scene.hpp"
#include "gaze3d/svg.hpp"
#include "gaze3d/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gaze3d;

namespace {

struct RunConfig {
    std::string scene = "scene1";
    int subjects = 30;
    int frames = 4;
    double sigma = 0.0;
    double dropout = 0.0;
    std::uint64_t seed = 7;
    std::string model = "all";
    int folds = 5;
    std::string data_dir;
    std::string bundle_dir;
    std::string eval_dir;
    std::string corr_dir;
    std::string out;

    // run parameters only; paths stay out so reruns at different locations
    // produce identical bytes
    json echo() const {
        return {{"scene", scene}, {"subjects", subjects}, {"frames", frames},
                {"sigma", sigma}, {"dropout", dropout},   {"seed", seed},
                {"model", model}, {"folds", folds}};
    }
};

SceneSpec resolve_scene(const std::string& name) {
    if (name == "scene1") return scene1_spec();
    if (name == "scene2") return scene2_spec();
    if (!fs::exists(name)) {
        throw ConfigInvalid("scene must be scene1, scene2 or a scene JSON path: " + name);
    }
    return scene_from_json(read_text_file(name));
}

void validate(const RunConfig& cfg) {
    if (cfg.subjects < 2) throw ConfigInvalid("--subjects must be >= 2");
    if (cfg.frames < 1) throw ConfigInvalid("--frames must be >= 1");
    if (cfg.sigma < 0) throw ConfigInvalid("--sigma must be >= 0");
    if (cfg.dropout < 0 || cfg.dropout > 1) throw ConfigInvalid("--dropout must be in [0,1]");
    if (cfg.folds < 2) throw ConfigInvalid("--folds must be >= 2");
    if (cfg.model != "all") model_kind_from_name(cfg.model);  // throws when unknown
}

// optional JSON config file merged *under* explicitly passed flags
void merge_config_file(const CLI::App& app, const std::string& path, RunConfig& cfg) {
    if (path.empty()) return;
    const json j = json::parse(read_text_file(path));
    auto take = [&](const char* flag, auto& field) {
        if (j.contains(flag) && app.count(std::string("--") + flag) == 0) {
            field = j.at(flag).get<std::decay_t<decltype(field)>>();
        }
    };
    take("scene", cfg.scene);
    take("subjects", cfg.subjects);
    take("frames", cfg.frames);
    take("sigma", cfg.sigma);
    take("dropout", cfg.dropout);
    take("seed", cfg.seed);
    take("model", cfg.model);
    take("folds", cfg.folds);
}

Dataset load_dataset_dir(const std::string& dir, const char* base) {
    const std::string csv = dir + "/" + base + ".csv";
    const std::string meta = dir + "/" + base + "_meta.json";
    if (!fs::exists(csv) || !fs::exists(meta)) {
        throw MissingInput("dataset files not found: " + csv + " (run the synth command first)");
    }
    return dataset_from_files(csv, meta);
}

int cmd_synth(const RunConfig& cfg) {
    validate(cfg);
    const SceneSpec scene = resolve_scene(cfg.scene);
    const auto subjects = make_subjects(cfg.subjects, cfg.seed);
    const NoiseSpec noise{cfg.sigma, cfg.dropout, cfg.seed};

    DirLock lock(cfg.out);
    Manifest manifest;
    manifest.command = "synth";
    manifest.config_json = cfg.echo().dump();

    const Dataset scene_ds = generate_sessions(scene, subjects, noise, cfg.frames);
    // calibration session: same subjects and noise level, disjoint seed stream
    NoiseSpec calib_noise = noise;
    calib_noise.seed = mix_seed({cfg.seed, 0xca11bULL});
    const Dataset calib_ds =
        generate_sessions(calibration_grid(), subjects, calib_noise, cfg.frames);

    emit_file(manifest, cfg.out, "dataset.csv", dataset_to_csv(scene_ds));
    emit_file(manifest, cfg.out, "dataset_meta.json", dataset_meta_to_json(scene_ds));
    emit_file(manifest, cfg.out, "calibration.csv", dataset_to_csv(calib_ds));
    emit_file(manifest, cfg.out, "calibration_meta.json", dataset_meta_to_json(calib_ds));
    emit_file(manifest, cfg.out, "scene.json", scene_to_json(scene));
    write_text_file(cfg.out + "/manifest.json", manifest.to_json());
    std::cout << "wrote " << scene_ds.frames.size() << " scene frames and "
              << calib_ds.frames.size() << " calibration frames to " << cfg.out << "\n";
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    validate(cfg);
    const Dataset scene_all = load_dataset_dir(cfg.data_dir, "dataset");
    const Dataset calib_all = load_dataset_dir(cfg.data_dir, "calibration");

    std::vector<int> train_ids, test_ids;
    split_subjects(dataset_subject_ids(scene_all), &train_ids, &test_ids);
    const Dataset scene_tr = filter_subjects(scene_all, train_ids);
    const Dataset calib_tr = filter_subjects(calib_all, train_ids);

    StackConfig sc;
    sc.depth_model = cfg.model;
    sc.cv_folds = cfg.folds;
    sc.seed = cfg.seed;

    DirLock lock(cfg.out);
    const TrainedStack stack = train(scene_tr, calib_tr, sc);
    save_stack(stack, cfg.out);

    Manifest manifest;
    manifest.command = "train";
    manifest.config_json = cfg.echo().dump();
    manifest.add_input_file(cfg.data_dir + "/dataset.csv");
    manifest.add_input_file(cfg.data_dir + "/calibration.csv");
    for (const auto& entry : fs::directory_iterator(cfg.out)) {
        const std::string name = entry.path().filename().string();
        if (name == "manifest.json" || name == ".lock") continue;
        manifest.add_output(name, read_text_file(entry.path().string()));
    }
    write_text_file(cfg.out + "/manifest.json", manifest.to_json());
    std::cout << "trained stack on " << train_ids.size() << " subjects; selected depth model "
              << model_kind_name(stack.selected_depth) << "\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg) {
    validate(cfg);
    const Dataset scene_all = load_dataset_dir(cfg.data_dir, "dataset");
    const Dataset calib_all = load_dataset_dir(cfg.data_dir, "calibration");
    const TrainedStack stack = load_stack(cfg.bundle_dir);

    std::vector<int> test_ids;
    const std::set<int> trained(stack.train_subjects.begin(), stack.train_subjects.end());
    for (int id : dataset_subject_ids(scene_all)) {
        if (!trained.count(id)) test_ids.push_back(id);
    }
    if (test_ids.empty()) throw MissingInput("no held-out subjects in " + cfg.data_dir);
    const Dataset scene_te = filter_subjects(scene_all, test_ids);
    const Dataset calib_te = filter_subjects(calib_all, test_ids);

    DirLock lock(cfg.out);
    std::vector<SampleRecord> records;
    const EvalReport report = evaluate(stack, scene_te, calib_te, &records);

    Manifest manifest;
    manifest.command = "eval";
    manifest.config_json = cfg.echo().dump();
    manifest.add_input_file(cfg.data_dir + "/dataset.csv");
    manifest.add_input_file(cfg.bundle_dir + "/stack.json");
    for (int id : test_ids) {
        const SubjectProfile profile = calibrate_subject(stack, calib_te, id);
        emit_file(manifest, cfg.out, "profile_subject_" + std::to_string(id) + ".json",
                  profile_to_json(profile));
    }
    emit_file(manifest, cfg.out, "table3_per_plane.csv", report.table3_csv());
    emit_file(manifest, cfg.out, "table33_per_point.csv", report.table33_csv());
    emit_file(manifest, cfg.out, "table4_models.csv", report.table4_csv());
    emit_file(manifest, cfg.out, "summary.json", report.summary_json());

    std::ostringstream rec;
    rec << "subject_id,point_id,plane_index,pre_2d_cm,post_2d_cm,x_err_cm,y_err_cm,"
           "z_err_cm,z_true,z_est,psom_converged\n";
    for (const auto& r : records) {
        rec << r.subject_id << ',' << r.point_id << ',' << r.plane_index << ','
            << format_double(r.pre_2d_cm) << ',' << format_double(r.post_2d_cm) << ','
            << format_double(r.x_err_cm) << ',' << format_double(r.y_err_cm) << ','
            << format_double(r.z_err_cm) << ',' << format_double(r.z_true_scene) << ','
            << format_double(r.z_est_scene) << ',' << (r.psom_converged ? 1 : 0) << '\n';
    }
    emit_file(manifest, cfg.out, "records.csv", rec.str());
    write_text_file(cfg.out + "/manifest.json", manifest.to_json());
    std::cout << "evaluated " << report.n_samples << " frame pairs; 3D error "
              << report.euclidean_3d_cm << " cm\n";
    return 0;
}

int cmd_corr(const RunConfig& cfg) {
    validate(cfg);
    const Dataset ds = load_dataset_dir(cfg.data_dir, "dataset");
    const GazePlane plane;
    const BinocularConfig binocular;
    const DisparityField field = scene_disparity_field(ds.scene, binocular, plane);
    const DepthTable table = depth_table_from_dataset(ds, plane, field);

    const CorrelationReport corr = pearson_corr(table);
    const ImportanceReport imp = gini_importance(table, cfg.seed);

    DirLock lock(cfg.out);
    Manifest manifest;
    manifest.command = "corr";
    manifest.config_json = cfg.echo().dump();
    manifest.add_input_file(cfg.data_dir + "/dataset.csv");

    emit_file(manifest, cfg.out, "depth_features.csv", table.to_csv());
    emit_file(manifest, cfg.out, "correlation.csv", corr.to_csv());
    emit_file(manifest, cfg.out, "importance.csv", imp.to_csv());

    json jcorr;
    for (std::size_t j = 0; j < corr.feature.size(); ++j) {
        if (std::isnan(corr.r_with_depth[j])) {
            jcorr[corr.feature[j]] = nullptr;
        } else {
            jcorr[corr.feature[j]] = corr.r_with_depth[j];
        }
    }
    json jimp;
    for (std::size_t j = 0; j < imp.feature.size(); ++j) {
        jimp[imp.feature[j]] = imp.importance[j];
    }
    emit_file(manifest, cfg.out, "correlation.json", jcorr.dump(2) + "\n");
    emit_file(manifest, cfg.out, "importance.json", jimp.dump(2) + "\n");

    std::vector<std::string> labels = DepthFeatureRow::feature_names();
    labels.push_back("z_" + table.unit_name);
    emit_file(manifest, cfg.out, "correlation_heatmap.svg",
              svg_heatmap(corr.full, labels, "feature / depth correlation (" + ds.scene_name + ")"));
    emit_file(manifest, cfg.out, "importance_chart.svg",
              svg_bar_chart(imp.importance, DepthFeatureRow::feature_names(),
                            "feature importance (" + ds.scene_name + ")"));
    write_text_file(cfg.out + "/manifest.json", manifest.to_json());
    std::cout << "feature analysis over " << table.X.rows << " rows written to " << cfg.out
              << "\n";
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    const std::string summary_path = cfg.eval_dir + "/summary.json";
    if (!fs::exists(summary_path)) {
        throw MissingInput("eval outputs not found: " + summary_path);
    }
    const json summary = json::parse(read_text_file(summary_path));

    std::ostringstream md;
    md << "# 3D point-of-gaze estimation report\n\n";
    md << "Scene: `" << summary.at("scene").get<std::string>() << "`, "
       << summary.at("n_samples").get<int>() << " evaluated frame pairs.\n\n";

    md << "## 2D gaze accuracy\n\n";
    md << "| stage | error (cm) | error (deg) |\n|---|---|---|\n";
    const auto& g2 = summary.at("gaze_2d");
    md << "| before calibration | " << g2.at("pre_cm").get<double>() << " | "
       << g2.at("pre_deg").get<double>() << " |\n";
    md << "| after calibration | " << g2.at("post_cm").get<double>() << " | "
       << g2.at("post_deg").get<double>() << " |\n\n";

    auto append_csv_table = [&md](const std::string& path, const std::string& title) {
        if (!fs::exists(path)) return;
        md << "## " << title << "\n\n";
        const CsvTable t = read_csv(path);
        md << "|";
        for (const auto& h : t.header) md << ' ' << h << " |";
        md << "\n|";
        for (std::size_t i = 0; i < t.header.size(); ++i) md << "---|";
        md << "\n";
        for (const auto& row : t.rows) {
            md << "|";
            for (const auto& c : row) md << ' ' << c << " |";
            md << "\n";
        }
        md << "\n";
    };
    append_csv_table(cfg.eval_dir + "/table3_per_plane.csv", "Per-plane X/Y error");
    append_csv_table(cfg.eval_dir + "/table4_models.csv", "Depth model comparison");

    const auto& p3 = summary.at("pog_3d");
    md << "## 3D PoG error\n\n";
    md << "| component | mean abs error (cm) |\n|---|---|\n";
    md << "| X | " << p3.at("x_err_cm").get<double>() << " |\n";
    md << "| Y | " << p3.at("y_err_cm").get<double>() << " |\n";
    md << "| Z | " << p3.at("z_err_cm").get<double>() << " |\n";
    md << "| Euclidean | " << p3.at("euclidean_cm").get<double>() << " |\n\n";

    const auto& dep = summary.at("depth");
    md << "Depth regression on held-out subjects: MAE " << dep.at("mae").get<double>() << ' '
       << dep.at("unit").get<std::string>() << ", MSE " << dep.at("mse").get<double>()
       << ", R2 " << dep.at("r2").get<double>() << ".\n\n";

    if (!cfg.corr_dir.empty()) {
        append_csv_table(cfg.corr_dir + "/correlation.csv", "Feature correlation with depth");
        append_csv_table(cfg.corr_dir + "/importance.csv", "Feature importance");
    }

    write_text_file(cfg.out, md.str());
    std::cout << "report written to " << cfg.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regression-based 3D point-of-gaze estimation on synthetic binocular data"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "master RNG seed");
        sub->add_option("--config", config_file, "JSON config merged under flags");
    };

    CLI::App* synth = app.add_subcommand("synth", "generate labeled synthetic sessions");
    synth->add_option("--scene", cfg.scene, "scene1 | scene2 | scene JSON path");
    synth->add_option("--subjects", cfg.subjects, "number of synthetic subjects");
    synth->add_option("--frames", cfg.frames, "frame pairs per test point");
    synth->add_option("--sigma", cfg.sigma, "landmark noise, pixels");
    synth->add_option("--dropout", cfg.dropout, "reflection dropout probability");
    synth->add_option("--out", cfg.out, "output directory")->required();
    add_common(synth);

    CLI::App* train_cmd = app.add_subcommand("train", "train the gaze and depth models");
    train_cmd->add_option("--data", cfg.data_dir, "synth output directory")->required();
    train_cmd->add_option("--model", cfg.model, "LR|BR|ENet|SVR|GBR|all");
    train_cmd->add_option("--folds", cfg.folds, "cross-validation folds");
    train_cmd->add_option("--out", cfg.out, "model bundle directory")->required();
    add_common(train_cmd);

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate on the held-out subjects");
    eval_cmd->add_option("--data", cfg.data_dir, "synth output directory")->required();
    eval_cmd->add_option("--bundle", cfg.bundle_dir, "model bundle directory")->required();
    eval_cmd->add_option("--out", cfg.out, "report output directory")->required();
    add_common(eval_cmd);

    CLI::App* corr_cmd = app.add_subcommand("corr", "feature correlation and importance");
    corr_cmd->add_option("--data", cfg.data_dir, "synth output directory")->required();
    corr_cmd->add_option("--out", cfg.out, "analysis output directory")->required();
    add_common(corr_cmd);

    CLI::App* report_cmd = app.add_subcommand("report", "consolidated markdown summary");
    report_cmd->add_option("--eval", cfg.eval_dir, "eval output directory")->required();
    report_cmd->add_option("--corr", cfg.corr_dir, "corr output directory");
    report_cmd->add_option("--out", cfg.out, "markdown file path")->required();
    add_common(report_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        merge_config_file(*sub, config_file, cfg);
        if (sub == synth) return cmd_synth(cfg);
        if (sub == train_cmd) return cmd_train(cfg);
        if (sub == eval_cmd) return cmd_eval(cfg);
        if (sub == corr_cmd) return cmd_corr(cfg);
        if (sub == report_cmd) return cmd_report(cfg);
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const MissingInput& e) {
        std::cerr << "missing input: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "pipeline error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
    return 1;
}
