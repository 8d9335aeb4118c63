#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coughdet/audio.hpp"
#include "coughdet/manifest.hpp"
#include "coughdet/metrics.hpp"
#include "coughdet/mfcc.hpp"
#include "coughdet/pca.hpp"
#include "coughdet/selectors.hpp"
#include "coughdet/svm.hpp"

namespace coughdet {

struct AudioSettings {
    int sample_rate = 16000;
    double duration_s = 5.0;
    bool operator==(const AudioSettings&) const = default;
};

struct StandardizationStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;  // floored at 1e-12
};

enum class SelectorChoice { none, frog, uve, vip };
std::string to_string(SelectorChoice c);
SelectorChoice selector_choice_from_string(const std::string& s);

struct Provenance {
    std::uint64_t seed = 0;
    std::string manifest_digest;
};

/// Everything needed to score a WAV end to end, persisted as versioned JSON.
struct PipelineModel {
    int format_version = 1;
    AudioSettings audio;
    MfccConfig mfcc;
    PcaModel pca;
    StandardizationStats standardize;
    std::optional<SelectionResult> selection;  // absent for the PCA-only baseline
    SvmModel svm;
    Provenance provenance;
};

struct TrainOptions {
    AudioSettings audio;
    MfccConfig mfcc;
    double variance_target = 0.95;
    SelectorChoice selector = SelectorChoice::none;
    int k = 20;
    SelectorConfig selector_config;
    SvmConfig svm;
    std::uint64_t seed = 0;
    std::string cache_dir;  // empty: no feature cache
    int jobs = 1;
};

PipelineModel train_pipeline(const std::string& manifest_path, const TrainOptions& options);

std::pair<ConfusionMatrix, MetricsRow> evaluate_pipeline(const PipelineModel& model,
                                                         const std::string& manifest_path,
                                                         Split split, int jobs = 1,
                                                         const std::string& cache_dir = {});

std::pair<Label, double> predict_clip(const PipelineModel& model, const std::string& wav_path);

void save_model(const PipelineModel& model, const std::string& path);
PipelineModel load_model(const std::string& path);
std::string model_to_json(const PipelineModel& model);
PipelineModel model_from_json(const std::string& text);

struct SweepRun {
    SelectorChoice selector;
    int k;  // ignored for the baseline
};

/// The default comparison grid: PCA baseline, frog k in {10..50},
/// uve k in {10..40}, vip k in {10..50} -- 15 runs.
std::vector<SweepRun> default_sweep_runs();

struct SweepResult {
    std::vector<MetricsRow> rows;
    Report report;
    std::vector<std::optional<PipelineModel>> models;  // index-aligned with rows
};

SweepResult sweep(const std::string& manifest_path, const TrainOptions& base,
                  const std::vector<SweepRun>& runs = default_sweep_runs(),
                  bool keep_models = false);

// --- feature plumbing (shared by the CLI `extract` command and the cache) ---

/// mono + resample + duration fit + cepstral chain (+ deltas when configured).
MfccMatrix clip_mfcc(const AudioClip& raw, const AudioSettings& audio, const MfccConfig& config);

/// Row-major flattening of clip_mfcc, the vector PCA sees.
Eigen::VectorXd clip_feature_vector(const AudioClip& raw, const AudioSettings& audio,
                                    const MfccConfig& config);

void write_feature_record(const std::string& path, const std::string& source_id,
                          const Eigen::MatrixXd& values);
std::pair<std::string, Eigen::MatrixXd> read_feature_record(const std::string& path);

/// FNV-1a 64 digest of a file's bytes, as hex. Used for cache keys and
/// manifest provenance.
std::string file_digest(const std::string& path);

/// Per-split feature matrix in manifest order plus +-1 labels
/// (+1 cough). Paths resolve relative to the manifest's directory.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> extract_split_features(
    const std::string& manifest_path, Split split, const AudioSettings& audio,
    const MfccConfig& config, const std::string& cache_dir = {}, int jobs = 1);

}  // namespace coughdet
