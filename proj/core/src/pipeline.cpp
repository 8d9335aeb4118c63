#include "coughdet/pipeline.hpp"

#include <atomic>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "coughdet/errors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace coughdet {

std::string to_string(SelectorChoice c) {
    switch (c) {
        case SelectorChoice::none: return "none";
        case SelectorChoice::frog: return "frog";
        case SelectorChoice::uve: return "uve";
        case SelectorChoice::vip: return "vip";
    }
    return "?";
}

SelectorChoice selector_choice_from_string(const std::string& s) {
    if (s == "none") return SelectorChoice::none;
    if (s == "frog") return SelectorChoice::frog;
    if (s == "uve") return SelectorChoice::uve;
    if (s == "vip") return SelectorChoice::vip;
    throw UsageError("unknown selector '" + s + "' (expected none|frog|uve|vip)");
}

// ---------------------------------------------------------------- features

MfccMatrix clip_mfcc(const AudioClip& raw, const AudioSettings& audio, const MfccConfig& config) {
    AudioClip clip = to_mono_resample(raw, audio.sample_rate);
    clip = fit_duration(clip, audio.duration_s);
    MfccMatrix m = compute_mfcc(clip, config);
    if (config.include_deltas) m = append_deltas(m);
    return m;
}

Eigen::VectorXd clip_feature_vector(const AudioClip& raw, const AudioSettings& audio,
                                    const MfccConfig& config) {
    const MfccMatrix m = clip_mfcc(raw, audio, config);
    Eigen::VectorXd flat(m.values.size());
    Eigen::Index pos = 0;
    for (Eigen::Index r = 0; r < m.values.rows(); ++r)
        for (Eigen::Index c = 0; c < m.values.cols(); ++c) flat(pos++) = m.values(r, c);
    return flat;
}

namespace {

constexpr char kFeatureMagic[4] = {'C', 'D', 'F', '1'};

std::uint64_t fnv1a(const unsigned char* data, std::size_t len, std::uint64_t h = 1469598103934665603ULL) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json audio_to_json(const AudioSettings& a) {
    return {{"sample_rate", a.sample_rate}, {"duration_s", a.duration_s}};
}

json mfcc_to_json(const MfccConfig& c) {
    return {{"pre_emphasis", c.pre_emphasis}, {"frame_len_s", c.frame_len_s},
            {"hop_s", c.hop_s},               {"fft_size", c.fft_size},
            {"n_mel_filters", c.n_mel_filters}, {"n_cepstra", c.n_cepstra},
            {"include_deltas", c.include_deltas}, {"fmin", c.fmin}, {"fmax", c.fmax}};
}

std::string cache_key(const std::string& wav_path, const AudioSettings& audio,
                      const MfccConfig& config) {
    const std::string cfg = audio_to_json(audio).dump() + mfcc_to_json(config).dump();
    std::uint64_t h = fnv1a(reinterpret_cast<const unsigned char*>(cfg.data()), cfg.size());
    const std::string digest = file_digest(wav_path);
    h = fnv1a(reinterpret_cast<const unsigned char*>(digest.data()), digest.size(), h);
    return hex64(h);
}

fs::path resolve(const fs::path& manifest_path, const std::string& entry_path) {
    const fs::path p(entry_path);
    return p.is_absolute() ? p : manifest_path.parent_path() / p;
}

}  // namespace

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile(path);
    std::vector<unsigned char> buf{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
    return hex64(fnv1a(buf.data(), buf.size()));
}

void write_feature_record(const std::string& path, const std::string& source_id,
                          const Eigen::MatrixXd& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(kFeatureMagic, 4);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    put_u32(static_cast<std::uint32_t>(source_id.size()));
    out.write(source_id.data(), static_cast<std::streamsize>(source_id.size()));
    put_u32(static_cast<std::uint32_t>(values.rows()));
    put_u32(static_cast<std::uint32_t>(values.cols()));
    for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            const double v = values(r, c);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
}

std::pair<std::string, Eigen::MatrixXd> read_feature_record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kFeatureMagic, 4) != 0)
        throw CorruptModel(path + ": bad feature record magic");
    auto get_u32 = [&]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    const auto id_len = get_u32();
    std::string id(id_len, '\0');
    in.read(id.data(), id_len);
    const auto rows = get_u32();
    const auto cols = get_u32();
    Eigen::MatrixXd values(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c) {
            double v;
            in.read(reinterpret_cast<char*>(&v), 8);
            values(r, c) = v;
        }
    if (!in) throw CorruptModel(path + ": truncated feature record");
    return {id, values};
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> extract_split_features(
    const std::string& manifest_path, Split split, const AudioSettings& audio,
    const MfccConfig& config, const std::string& cache_dir, int jobs) {
    const DatasetManifest manifest = load_manifest(manifest_path);
    const auto entries = manifest.split(split);
    if (entries.empty()) throw EmptyInput("no entries in split " + to_string(split));
    if (!cache_dir.empty()) fs::create_directories(cache_dir);

    Eigen::VectorXd y(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = entries[i].label == Label::cough ? 1.0 : -1.0;

    Eigen::MatrixXd X;
    std::mutex init_mutex;
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= entries.size()) return;
            try {
                const fs::path wav = resolve(manifest_path, entries[i].path);
                if (!fs::exists(wav)) throw MissingFile(wav.string());

                Eigen::VectorXd flat;
                fs::path cache_file;
                if (!cache_dir.empty()) {
                    cache_file = fs::path(cache_dir) / (cache_key(wav.string(), audio, config) + ".feat");
                    if (fs::exists(cache_file)) {
                        const auto [id, values] = read_feature_record(cache_file.string());
                        flat = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
                    }
                }
                if (flat.size() == 0) {
                    flat = clip_feature_vector(load_wav(wav.string()), audio, config);
                    if (!cache_dir.empty()) {
                        Eigen::MatrixXd row(1, flat.size());
                        row.row(0) = flat.transpose();
                        write_feature_record(cache_file.string(), entries[i].path, row);
                    }
                }
                {
                    std::lock_guard<std::mutex> lock(init_mutex);
                    if (X.size() == 0)
                        X.resize(static_cast<Eigen::Index>(entries.size()), flat.size());
                    if (flat.size() != X.cols())
                        throw DimensionMismatch(entries[i].path + ": inconsistent feature size");
                    X.row(static_cast<Eigen::Index>(i)) = flat.transpose();
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(entries.size());
                return;
            }
        }
    };

    const int n_jobs = std::max(1, jobs);
    if (n_jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return {X, y};
}

// ---------------------------------------------------------------- training

namespace {

StandardizationStats fit_standardization(const Eigen::MatrixXd& scores) {
    StandardizationStats stats;
    stats.mean = scores.colwise().mean();
    stats.std.resize(scores.cols());
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
        const double var = (scores.col(j).array() - stats.mean(j)).square().mean();
        stats.std(j) = std::max(std::sqrt(var), 1e-12);
    }
    return stats;
}

Eigen::MatrixXd standardize_rows(const StandardizationStats& stats, const Eigen::MatrixXd& scores) {
    return (scores.rowwise() - stats.mean.transpose()).array().rowwise() /
           stats.std.transpose().array();
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(idx[j]);
    return out;
}

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.what());
    }
}

/// Shared prediction head: PCA scores -> standardized -> selected columns.
Eigen::VectorXd model_features(const PipelineModel& model, const Eigen::VectorXd& flat) {
    Eigen::VectorXd s = pca_transform(model.pca, flat);
    s = (s - model.standardize.mean).cwiseQuotient(model.standardize.std);
    if (!model.selection) return s;
    Eigen::VectorXd out(static_cast<Eigen::Index>(model.selection->selected.size()));
    for (std::size_t j = 0; j < model.selection->selected.size(); ++j)
        out(static_cast<Eigen::Index>(j)) = s(model.selection->selected[j]);
    return out;
}

PipelineModel train_on_features(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const TrainOptions& options, const std::string& manifest_digest,
                                const PcaModel* shared_pca) {
    const bool has_pos = (y.array() > 0).any();
    const bool has_neg = (y.array() < 0).any();
    if (!has_pos || !has_neg) throw SingleClass("train split needs both classes");

    PipelineModel model;
    model.audio = options.audio;
    model.mfcc = options.mfcc;
    model.provenance.seed = options.seed;
    model.provenance.manifest_digest = manifest_digest;

    model.pca = shared_pca ? *shared_pca
                           : stage("pca", [&] { return fit_pca(X, options.variance_target); });
    const Eigen::MatrixXd scores =
        stage("pca", [&] { return pca_transform_rows(model.pca, X); });
    model.standardize = fit_standardization(scores);
    const Eigen::MatrixXd Z = standardize_rows(model.standardize, scores);

    Eigen::MatrixXd Zsel = Z;
    if (options.selector != SelectorChoice::none) {
        model.selection = stage("selector", [&]() -> SelectionResult {
            switch (options.selector) {
                case SelectorChoice::frog:
                    return select_random_frog(Z, y, options.k, options.selector_config, options.seed);
                case SelectorChoice::uve:
                    return select_uve(Z, y, options.k, options.selector_config, options.seed);
                default:
                    return select_vip(Z, y, options.k, options.selector_config);
            }
        });
        Zsel = select_columns(Z, model.selection->selected);
    }

    model.svm = stage("svm", [&] { return fit_svm(Zsel, y, options.svm); });
    return model;
}

}  // namespace

PipelineModel train_pipeline(const std::string& manifest_path, const TrainOptions& options) {
    const auto [X, y] = stage("ingest", [&] {
        return extract_split_features(manifest_path, Split::train, options.audio, options.mfcc,
                                      options.cache_dir, options.jobs);
    });
    return train_on_features(X, y, options, file_digest(manifest_path), nullptr);
}

std::pair<ConfusionMatrix, MetricsRow> evaluate_pipeline(const PipelineModel& model,
                                                         const std::string& manifest_path,
                                                         Split split, int jobs,
                                                         const std::string& cache_dir) {
    const auto [X, y] =
        extract_split_features(manifest_path, split, model.audio, model.mfcc, cache_dir, jobs);

    std::vector<Label> pred, truth;
    pred.reserve(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Eigen::VectorXd features = model_features(model, X.row(i).transpose());
        pred.push_back(svm_predict(model.svm, features) == SvmLabel::cough ? Label::cough
                                                                           : Label::non_cough);
        truth.push_back(y(i) > 0 ? Label::cough : Label::non_cough);
    }
    const ConfusionMatrix cm = confusion(pred, truth);
    MetricsRow row = compute_metrics(cm);
    row.method = model.selection ? to_string(model.selection->method) : "pca";
    row.k = model.selection ? static_cast<int>(model.selection->selected.size()) : model.pca.k;
    return {cm, row};
}

std::pair<Label, double> predict_clip(const PipelineModel& model, const std::string& wav_path) {
    const AudioClip raw = load_wav(wav_path);
    const Eigen::VectorXd flat = clip_feature_vector(raw, model.audio, model.mfcc);
    const Eigen::VectorXd features = model_features(model, flat);
    const double score = svm_decision(model.svm, features);
    return {score >= 0 ? Label::cough : Label::non_cough, score};
}

// ------------------------------------------------------------ persistence

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r).transpose()));
    return rows;
}

Eigen::MatrixXd mat_from_json(const json& rows, Eigen::Index cols_hint = -1) {
    const auto nr = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index nc = nr > 0 ? static_cast<Eigen::Index>(rows[0].size()) : std::max<Eigen::Index>(cols_hint, 0);
    Eigen::MatrixXd m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r) m.row(r) = vec_from_json(rows[static_cast<std::size_t>(r)]).transpose();
    return m;
}

MfccConfig mfcc_from_json(const json& j) {
    MfccConfig c;
    c.pre_emphasis = j.at("pre_emphasis");
    c.frame_len_s = j.at("frame_len_s");
    c.hop_s = j.at("hop_s");
    c.fft_size = j.at("fft_size");
    c.n_mel_filters = j.at("n_mel_filters");
    c.n_cepstra = j.at("n_cepstra");
    c.include_deltas = j.at("include_deltas");
    c.fmin = j.at("fmin");
    c.fmax = j.at("fmax");
    return c;
}

json selector_config_to_json(const SelectorConfig& c) {
    return {{"n_components", c.n_components}, {"folds", c.folds},
            {"n_iterations", c.n_iterations}, {"q0", c.q0},
            {"theta", c.theta},               {"eta", c.eta},
            {"n_noise", c.n_noise},           {"vip_strict", c.vip_strict}};
}

SelectorConfig selector_config_from_json(const json& j) {
    SelectorConfig c;
    c.n_components = j.at("n_components");
    c.folds = j.at("folds");
    c.n_iterations = j.at("n_iterations");
    c.q0 = j.at("q0");
    c.theta = j.at("theta");
    c.eta = j.at("eta");
    c.n_noise = j.at("n_noise");
    c.vip_strict = j.at("vip_strict");
    return c;
}

SelectorMethod selector_method_from_string(const std::string& s) {
    if (s == "random_frog") return SelectorMethod::random_frog;
    if (s == "uve") return SelectorMethod::uve;
    if (s == "vip") return SelectorMethod::vip;
    throw CorruptModel("unknown selection method '" + s + "'");
}

}  // namespace

std::string model_to_json(const PipelineModel& model) {
    json j;
    j["format_version"] = model.format_version;
    j["audio"] = audio_to_json(model.audio);
    j["mfcc"] = mfcc_to_json(model.mfcc);
    j["pca"] = {{"mean", vec_to_json(model.pca.mean)},
                {"projection", mat_to_json(model.pca.projection)},
                {"eigenvalues", vec_to_json(model.pca.eigenvalues)},
                {"k", model.pca.k},
                {"variance_target", model.pca.variance_target}};
    j["standardize"] = {{"mean", vec_to_json(model.standardize.mean)},
                        {"std", vec_to_json(model.standardize.std)}};
    if (model.selection) {
        const auto& s = *model.selection;
        j["selection"] = {{"method", to_string(s.method)},
                          {"importance", vec_to_json(s.importance)},
                          {"selected", s.selected},
                          {"config", selector_config_to_json(s.config_echo)},
                          {"seed", s.seed},
                          {"above_noise_cutoff", s.above_noise_cutoff},
                          {"below_threshold_warning", s.below_threshold_warning}};
    } else {
        j["selection"] = nullptr;
    }
    j["svm"] = {{"w", vec_to_json(model.svm.w)},
                {"b", model.svm.b},
                {"c", model.svm.c},
                {"support_indices", model.svm.support_indices},
                {"objective", model.svm.objective}};
    j["provenance"] = {{"seed", model.provenance.seed},
                       {"manifest_digest", model.provenance.manifest_digest}};
    return j.dump(2) + "\n";
}

PipelineModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw CorruptModel(e.what());
    }
    if (!j.contains("format_version") || !j["format_version"].is_number_integer())
        throw CorruptModel("missing format_version");
    const int version = j["format_version"];
    if (version != 1)
        throw VersionMismatch("model format_version " + std::to_string(version) +
                              ", expected 1");
    try {
        PipelineModel m;
        m.format_version = version;
        m.audio.sample_rate = j.at("audio").at("sample_rate");
        m.audio.duration_s = j.at("audio").at("duration_s");
        m.mfcc = mfcc_from_json(j.at("mfcc"));
        const auto& p = j.at("pca");
        m.pca.mean = vec_from_json(p.at("mean"));
        m.pca.eigenvalues = vec_from_json(p.at("eigenvalues"));
        m.pca.k = p.at("k");
        m.pca.variance_target = p.at("variance_target");
        m.pca.projection = mat_from_json(p.at("projection"), m.pca.mean.size());
        m.standardize.mean = vec_from_json(j.at("standardize").at("mean"));
        m.standardize.std = vec_from_json(j.at("standardize").at("std"));
        if (!j.at("selection").is_null()) {
            const auto& s = j.at("selection");
            SelectionResult sel;
            sel.method = selector_method_from_string(s.at("method"));
            sel.importance = vec_from_json(s.at("importance"));
            sel.selected = s.at("selected").get<std::vector<int>>();
            sel.config_echo = selector_config_from_json(s.at("config"));
            sel.seed = s.at("seed");
            sel.above_noise_cutoff = s.at("above_noise_cutoff").get<std::vector<int>>();
            sel.below_threshold_warning = s.at("below_threshold_warning");
            m.selection = std::move(sel);
        }
        const auto& v = j.at("svm");
        m.svm.w = vec_from_json(v.at("w"));
        m.svm.b = v.at("b");
        m.svm.c = v.at("c");
        m.svm.support_indices = v.at("support_indices").get<std::vector<int>>();
        m.svm.objective = v.at("objective");
        m.provenance.seed = j.at("provenance").at("seed");
        m.provenance.manifest_digest = j.at("provenance").at("manifest_digest");

        for (int idx : m.selection ? m.selection->selected : std::vector<int>{})
            if (idx < 0 || idx >= m.pca.k) throw CorruptModel("selected index out of range");
        const auto expected_dim =
            m.selection ? static_cast<Eigen::Index>(m.selection->selected.size())
                        : static_cast<Eigen::Index>(m.pca.k);
        if (m.svm.w.size() != expected_dim) throw CorruptModel("SVM weight length mismatch");
        return m;
    } catch (const json::exception& e) {
        throw CorruptModel(e.what());
    }
}

void save_model(const PipelineModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << model_to_json(model);
}

PipelineModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

// ----------------------------------------------------------------- sweep

std::vector<SweepRun> default_sweep_runs() {
    std::vector<SweepRun> runs{{SelectorChoice::none, 0}};
    for (int k : {10, 20, 30, 40, 50}) runs.push_back({SelectorChoice::frog, k});
    for (int k : {10, 20, 30, 40}) runs.push_back({SelectorChoice::uve, k});
    for (int k : {10, 20, 30, 40, 50}) runs.push_back({SelectorChoice::vip, k});
    return runs;
}

SweepResult sweep(const std::string& manifest_path, const TrainOptions& base,
                  const std::vector<SweepRun>& runs, bool keep_models) {
    const auto [Xtrain, ytrain] = extract_split_features(
        manifest_path, Split::train, base.audio, base.mfcc, base.cache_dir, base.jobs);
    const auto [Xtest, ytest] = extract_split_features(
        manifest_path, Split::test, base.audio, base.mfcc, base.cache_dir, base.jobs);
    const std::string digest = file_digest(manifest_path);

    // Every run shares the deterministic PCA stage.
    const PcaModel pca = fit_pca(Xtrain, base.variance_target);

    std::vector<Label> truth;
    for (Eigen::Index i = 0; i < ytest.size(); ++i)
        truth.push_back(ytest(i) > 0 ? Label::cough : Label::non_cough);

    SweepResult result;
    for (const auto& run : runs) {
        TrainOptions options = base;
        options.selector = run.selector;
        options.k = run.k;
        MetricsRow row;
        row.method = run.selector == SelectorChoice::none
                         ? "pca"
                         : (run.selector == SelectorChoice::frog
                                ? "random_frog"
                                : to_string(run.selector));
        row.k = run.k;
        try {
            PipelineModel model = train_on_features(Xtrain, ytrain, options, digest, &pca);
            std::vector<Label> pred;
            for (Eigen::Index i = 0; i < Xtest.rows(); ++i) {
                const Eigen::VectorXd f = model_features(model, Xtest.row(i).transpose());
                pred.push_back(svm_predict(model.svm, f) == SvmLabel::cough ? Label::cough
                                                                            : Label::non_cough);
            }
            const MetricsRow computed = compute_metrics(confusion(pred, truth));
            row.accuracy = computed.accuracy;
            row.recall = computed.recall;
            row.precision = computed.precision;
            row.f1 = computed.f1;
            if (run.selector == SelectorChoice::none) row.k = model.pca.k;
            result.models.push_back(keep_models ? std::optional<PipelineModel>(std::move(model))
                                                : std::nullopt);
        } catch (const Error& e) {
            row.failed = true;
            row.error = e.what();
            result.models.push_back(std::nullopt);
        }
        result.rows.push_back(std::move(row));
    }
    result.report = render_report(result.rows);
    return result;
}

}  // namespace coughdet
