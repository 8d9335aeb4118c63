#include <filesystem>
#include <fstream>
#include <limits>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coughdet/errors.hpp"
#include "coughdet/pipeline.hpp"
#include "coughdet/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace coughdet;

namespace {

struct CommonFlags {
    std::string manifest;
    std::string config_file;
    std::string cache_dir;
    std::uint64_t seed = 0;
    int jobs = 1;
    int sample_rate = 16000;
    double duration_s = 5.0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_manifest) {
    auto* m = cmd->add_option("--manifest", flags.manifest, "Dataset manifest CSV");
    if (needs_manifest) m->required();
    cmd->add_option("--config", flags.config_file, "JSON config file (flags override it)");
    cmd->add_option("--cache", flags.cache_dir, "Feature cache directory");
    cmd->add_option("--seed", flags.seed, "Global seed for all stochastic stages");
    cmd->add_option("--jobs", flags.jobs, "Parallel feature-extraction workers");
    cmd->add_option("--rate", flags.sample_rate, "Working sample rate (Hz)");
    cmd->add_option("--duration", flags.duration_s, "Working clip duration (s)");
}

// Config-file values fill in whatever the command line left untouched.
void apply_config_file(const CLI::App* cmd, const CommonFlags& flags, TrainOptions& options) {
    if (flags.config_file.empty()) return;
    std::ifstream in(flags.config_file);
    if (!in) throw IoError("cannot open config " + flags.config_file);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config JSON: ") + e.what());
    }
    auto untouched = [&](const std::string& name) {
        const auto* opt = cmd->get_option_no_throw(name);
        return opt == nullptr || opt->count() == 0;
    };
    if (j.contains("sample_rate") && untouched("--rate")) options.audio.sample_rate = j["sample_rate"];
    if (j.contains("duration_s") && untouched("--duration")) options.audio.duration_s = j["duration_s"];
    if (j.contains("seed") && untouched("--seed")) options.seed = j["seed"];
    if (j.contains("selector") && untouched("--selector"))
        options.selector = selector_choice_from_string(j["selector"]);
    if (j.contains("k") && untouched("--k")) options.k = j["k"];
    if (j.contains("svm_c") && untouched("--svm-c")) options.svm.c = j["svm_c"];
    if (j.contains("svm_tol") && untouched("--svm-tol")) options.svm.tol = j["svm_tol"];
    if (j.contains("variance_target")) options.variance_target = j["variance_target"];
    if (j.contains("frog_iterations")) options.selector_config.n_iterations = j["frog_iterations"];
    if (j.contains("frog_q0")) options.selector_config.q0 = j["frog_q0"];
    if (j.contains("frog_theta")) options.selector_config.theta = j["frog_theta"];
    if (j.contains("frog_eta")) options.selector_config.eta = j["frog_eta"];
    if (j.contains("pls_components")) options.selector_config.n_components = j["pls_components"];
    if (j.contains("cv_folds")) options.selector_config.folds = j["cv_folds"];
}

TrainOptions make_options(const CommonFlags& flags) {
    TrainOptions options;
    options.audio.sample_rate = flags.sample_rate;
    options.audio.duration_s = flags.duration_s;
    options.seed = flags.seed;
    options.cache_dir = flags.cache_dir;
    options.jobs = flags.jobs;
    return options;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "test") return Split::test;
    throw UsageError("unknown split '" + s + "' (expected train|test)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cough event detector: MFCC features, PCA, PLS-based feature "
                 "selection, linear SVM"};
    app.require_subcommand(1);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
    SynthConfig synth_config;
    std::string synth_out;
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();
    synth_cmd->add_option("--train", synth_config.train_per_class, "Train clips per class");
    synth_cmd->add_option("--test", synth_config.test_per_class, "Test clips per class");
    synth_cmd->add_option("--rate", synth_config.sample_rate, "Sample rate (Hz)");
    synth_cmd->add_option("--duration", synth_config.duration_s, "Clip duration (s)");
    synth_cmd->add_option("--seed", synth_config.seed, "Seed");

    // extract
    auto* extract_cmd = app.add_subcommand("extract", "Extract MFCC features to binary records");
    CommonFlags extract_flags;
    add_common(extract_cmd, extract_flags, true);
    std::string extract_out, extract_csv;
    extract_cmd->add_option("--out", extract_out, "Output directory for .feat records")->required();
    extract_cmd->add_option("--csv", extract_csv, "Optional CSV summary path");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train one detection model");
    CommonFlags train_flags;
    add_common(train_cmd, train_flags, true);
    std::string train_model_out, train_selector = "none", train_importance_csv;
    int train_k = 20;
    double train_svm_c = 1.0, train_svm_tol = 1e-4;
    train_cmd->add_option("--model", train_model_out, "Model output path")->required();
    train_cmd->add_option("--selector", train_selector, "none|frog|uve|vip");
    train_cmd->add_option("--k", train_k, "Number of selected features");
    train_cmd->add_option("--svm-c", train_svm_c, "SVM soft-margin penalty");
    train_cmd->add_option("--svm-tol", train_svm_tol, "SVM KKT tolerance");
    train_cmd->add_option("--importance-csv", train_importance_csv,
                          "Export per-feature importance CSV");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Train and evaluate the full comparison grid");
    CommonFlags sweep_flags;
    add_common(sweep_cmd, sweep_flags, true);
    std::string sweep_out = "report", sweep_models_dir;
    sweep_cmd->add_option("--out", sweep_out, "Report path prefix (.txt and .csv appended)");
    sweep_cmd->add_option("--models-dir", sweep_models_dir, "Also save every trained model here");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a model on a manifest split");
    CommonFlags eval_flags;
    add_common(eval_cmd, eval_flags, true);
    std::string eval_model, eval_split = "test", eval_out;
    eval_cmd->add_option("--model", eval_model, "Model path")->required();
    eval_cmd->add_option("--split", eval_split, "train|test");
    eval_cmd->add_option("--out", eval_out, "Optional CSV output path");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Classify WAV files");
    std::string predict_model;
    std::vector<std::string> predict_paths;
    predict_cmd->add_option("--model", predict_model, "Model path")->required();
    predict_cmd->add_option("wavs", predict_paths, "WAV files")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "Render a metrics CSV as a comparison table");
    std::string report_in, report_out;
    report_cmd->add_option("--in", report_in, "CSV with method,k,accuracy,recall,precision,f1")
        ->required();
    report_cmd->add_option("--out", report_out, "Optional text output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth_cmd) {
            const std::string manifest = generate_synth_corpus(synth_out, synth_config);
            std::cout << "manifest: " << manifest << "\n";
        } else if (*extract_cmd) {
            TrainOptions options = make_options(extract_flags);
            apply_config_file(extract_cmd, extract_flags, options);
            fs::create_directories(extract_out);
            const DatasetManifest manifest = load_manifest(extract_flags.manifest);
            std::ostringstream csv;
            csv << "path,frames,coeffs\n";
            for (const auto& entry : manifest.entries) {
                const fs::path wav = fs::path(extract_flags.manifest).parent_path() / entry.path;
                if (!fs::exists(wav)) throw MissingFile(wav.string());
                const MfccMatrix m = clip_mfcc(load_wav(wav.string()), options.audio, options.mfcc);
                const fs::path out =
                    fs::path(extract_out) / (fs::path(entry.path).stem().string() + ".feat");
                write_feature_record(out.string(), entry.path, m.values);
                csv << entry.path << ',' << m.values.rows() << ',' << m.values.cols() << '\n';
            }
            if (!extract_csv.empty()) write_text(extract_csv, csv.str());
            std::cout << "extracted " << manifest.entries.size() << " clips to " << extract_out
                      << "\n";
        } else if (*train_cmd) {
            TrainOptions options = make_options(train_flags);
            options.selector = selector_choice_from_string(train_selector);
            options.k = train_k;
            options.svm.c = train_svm_c;
            options.svm.tol = train_svm_tol;
            apply_config_file(train_cmd, train_flags, options);
            const PipelineModel model = train_pipeline(train_flags.manifest, options);
            save_model(model, train_model_out);
            std::cout << "pca components: " << model.pca.k << "\n";
            if (model.selection) {
                std::cout << "selected features: " << model.selection->selected.size() << "\n";
                if (!train_importance_csv.empty())
                    write_text(train_importance_csv, importance_csv(*model.selection));
            }
            std::cout << "model: " << train_model_out << "\n";
        } else if (*sweep_cmd) {
            TrainOptions options = make_options(sweep_flags);
            apply_config_file(sweep_cmd, sweep_flags, options);
            const bool keep = !sweep_models_dir.empty();
            const SweepResult result = sweep(sweep_flags.manifest, options,
                                             default_sweep_runs(), keep);
            if (keep) {
                fs::create_directories(sweep_models_dir);
                for (std::size_t i = 0; i < result.models.size(); ++i) {
                    if (!result.models[i]) continue;
                    const auto& row = result.rows[i];
                    const fs::path out = fs::path(sweep_models_dir) /
                                         (row.method + "_k" + std::to_string(row.k) + ".json");
                    save_model(*result.models[i], out.string());
                }
            }
            write_text(sweep_out + ".txt", result.report.text);
            write_text(sweep_out + ".csv", result.report.csv);
            std::cout << result.report.text;
        } else if (*eval_cmd) {
            const PipelineModel model = load_model(eval_model);
            const auto [cm, row] = evaluate_pipeline(model, eval_flags.manifest,
                                                     split_from_string(eval_split), eval_flags.jobs,
                                                     eval_flags.cache_dir);
            const Report report = render_report({row});
            std::cout << "tp=" << cm.tp << " fn=" << cm.fn << " fp=" << cm.fp << " tn=" << cm.tn
                      << "\n"
                      << report.text;
            if (!eval_out.empty()) write_text(eval_out, report.csv);
        } else if (*predict_cmd) {
            const PipelineModel model = load_model(predict_model);
            for (const auto& path : predict_paths) {
                const auto [label, score] = predict_clip(model, path);
                std::cout << path << ": " << to_string(label) << " (score " << score << ")\n";
            }
        } else if (*report_cmd) {
            std::ifstream in(report_in);
            if (!in) throw IoError("cannot open " + report_in);
            std::string line;
            if (!std::getline(in, line)) throw EmptyInput("empty report CSV");
            std::vector<MetricsRow> rows;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::stringstream ss(line);
                MetricsRow row;
                std::string field;
                std::getline(ss, row.method, ',');
                std::getline(ss, field, ',');
                row.k = std::stoi(field);
                auto next_double = [&]() {
                    std::getline(ss, field, ',');
                    return field.empty() || field == "nan"
                               ? std::numeric_limits<double>::quiet_NaN()
                               : std::stod(field);
                };
                row.accuracy = next_double();
                row.recall = next_double();
                row.precision = next_double();
                row.f1 = next_double();
                rows.push_back(std::move(row));
            }
            const Report report = render_report(rows);
            std::cout << report.text;
            if (!report_out.empty()) write_text(report_out, report.text);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
