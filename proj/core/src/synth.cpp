#include "coughdet/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "coughdet/errors.hpp"

namespace coughdet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two-pole resonator; random pole radius/angle give each source its own
// spectral color.
struct Resonator {
    double r, theta, y1 = 0.0, y2 = 0.0;
    double step(double x) {
        const double y = x + 2.0 * r * std::cos(theta) * y1 - r * r * y2;
        y2 = y1;
        y1 = y;
        return y;
    }
};

std::vector<double> colored_floor(std::mt19937_64& rng, std::size_t n, int sample_rate) {
    std::uniform_real_distribution<double> level_dist(0.002, 0.015);
    std::uniform_real_distribution<double> pole_dist(0.3, 0.9);
    std::uniform_real_distribution<double> angle_dist(0.0, kTwoPi * 1500.0 / sample_rate);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Resonator res{pole_dist(rng), angle_dist(rng)};
    const double level = level_dist(rng);
    std::vector<double> x(n);
    double peak = 1e-9;
    for (auto& v : x) {
        v = res.step(gauss(rng));
        peak = std::max(peak, std::abs(v));
    }
    for (auto& v : x) v *= level / peak * 3.0;
    return x;
}

}  // namespace

AudioClip synth_cough_clip(int sample_rate, double duration_s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
    auto x = colored_floor(rng, n, sample_rate);

    std::uniform_int_distribution<int> n_bursts_dist(4, 8);
    std::uniform_real_distribution<double> pos(0.05, 0.92);
    std::uniform_real_distribution<double> amp(0.45, 0.85);
    std::uniform_real_distribution<double> decay_ms(120.0, 420.0);
    // Narrow jitter around a shared formant band keeps the class signature
    // consistent from clip to clip.
    std::uniform_real_distribution<double> pole_dist(0.80, 0.90);
    std::uniform_real_distribution<double> angle_dist(kTwoPi * 700.0 / sample_rate,
                                                      kTwoPi * 1300.0 / sample_rate);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int bursts = n_bursts_dist(rng);
    for (int b = 0; b < bursts; ++b) {
        const auto start = static_cast<std::size_t>(pos(rng) * static_cast<double>(n));
        const double a = amp(rng);
        const double attack = 0.004 * sample_rate;
        const double decay = decay_ms(rng) * 1e-3 * sample_rate;
        const auto len = static_cast<std::size_t>(attack + 4.0 * decay);
        Resonator res{pole_dist(rng), angle_dist(rng)};
        const double gain = (1.0 - res.r) * 0.8 + 0.2;
        for (std::size_t i = 0; i < len && start + i < n; ++i) {
            const double t = static_cast<double>(i);
            const double env = t < attack ? t / attack : std::exp(-(t - attack) / decay);
            // Broadband base plus the formant resonance.
            const double w = gauss(rng);
            x[start + i] += a * env * (0.5 * w + 0.6 * gain * res.step(w));
        }
    }

    // Occasional soft inhale between coughs: long, quiet, broadband.
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < 0.5) {
        const auto start = static_cast<std::size_t>(pos(rng) * static_cast<double>(n));
        const auto len = static_cast<std::size_t>(0.3 * sample_rate);
        for (std::size_t i = 0; i < len && start + i < n; ++i) {
            const double env = std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(len));
            x[start + i] += 0.05 * env * gauss(rng);
        }
    }

    AudioClip clip;
    clip.sample_rate = sample_rate;
    clip.channels = 1;
    for (auto& v : x) v = std::clamp(v, -1.0, 1.0);
    clip.samples = std::move(x);
    return clip;
}

AudioClip synth_noncough_clip(int sample_rate, double duration_s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
    auto x = colored_floor(rng, n, sample_rate);

    std::uniform_int_distribution<int> n_sources_dist(1, 3);
    std::uniform_int_distribution<int> kind_dist(0, 3);
    std::uniform_real_distribution<double> tone_hz(120.0, 3200.0);
    std::uniform_real_distribution<double> hum_hz(50.0, 220.0);
    std::uniform_real_distribution<double> amp(0.12, 0.4);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::uniform_real_distribution<double> vib_rate(2.0, 8.0);
    std::uniform_real_distribution<double> vib_depth(0.0, 0.03);
    std::uniform_real_distribution<double> am_rate(8.0, 40.0);
    std::uniform_real_distribution<double> pole_dist(0.7, 0.98);
    std::uniform_real_distribution<double> angle_dist(0.0, kTwoPi * 3000.0 / sample_rate);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    const int sources = n_sources_dist(rng);
    for (int s = 0; s < sources; ++s) {
        const int kind = kind_dist(rng);
        const double a = amp(rng);
        if (kind == 0) {
            // Tone with optional vibrato.
            const double f = tone_hz(rng);
            const double ph = phase(rng);
            const double vr = vib_rate(rng), vd = vib_depth(rng);
            double arg = ph;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / sample_rate;
                arg += kTwoPi * f * (1.0 + vd * std::sin(kTwoPi * vr * t)) / sample_rate;
                x[i] += a * std::sin(arg);
            }
        } else if (kind == 1) {
            // Exponential chirp between two random frequencies.
            const double f0 = tone_hz(rng), f1 = tone_hz(rng);
            double arg = phase(rng);
            for (std::size_t i = 0; i < n; ++i) {
                const double u = static_cast<double>(i) / static_cast<double>(n);
                const double f = f0 * std::pow(f1 / f0, u);
                arg += kTwoPi * f / sample_rate;
                x[i] += a * std::sin(arg);
            }
        } else if (kind == 2) {
            // Hum with harmonics and slow drift.
            const double f = hum_hz(rng);
            const double ph = phase(rng);
            const double drift = 1.0 + 0.04 * (coin(rng) - 0.5);
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / sample_rate;
                const double ft = f * (1.0 + (drift - 1.0) * t / duration_s);
                x[i] += a * (std::sin(kTwoPi * ft * t + ph) + 0.5 * std::sin(kTwoPi * 2 * ft * t) +
                             0.25 * std::sin(kTwoPi * 3 * ft * t));
            }
        } else {
            // Stationary colored noise, optionally amplitude-modulated.
            Resonator res{pole_dist(rng), angle_dist(rng)};
            const double mr = am_rate(rng);
            const bool modulated = coin(rng) < 0.5;
            const double gain = (1.0 - res.r) * 0.8 + 0.2;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / sample_rate;
                const double env = modulated ? 0.5 * (1.0 + std::sin(kTwoPi * mr * t)) : 1.0;
                x[i] += a * gain * env * res.step(gauss(rng));
            }
        }
    }

    AudioClip clip;
    clip.sample_rate = sample_rate;
    clip.channels = 1;
    for (auto& v : x) v = std::clamp(v, -1.0, 1.0);
    clip.samples = std::move(x);
    return clip;
}

std::string generate_synth_corpus(const std::string& out_dir, const SynthConfig& config) {
    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    fs::create_directories(root / "clips");

    std::ostringstream manifest;
    manifest << "path,label,split\n";

    std::uint64_t counter = 0;
    auto emit = [&](const std::string& stem, int count, bool cough, const std::string& split) {
        for (int i = 0; i < count; ++i) {
            const std::uint64_t clip_seed = config.seed * 1000003ULL + counter * 7919ULL + 17ULL;
            ++counter;
            AudioClip clip = cough
                                 ? synth_cough_clip(config.sample_rate, config.duration_s, clip_seed)
                                 : synth_noncough_clip(config.sample_rate, config.duration_s, clip_seed);
            char name[64];
            std::snprintf(name, sizeof(name), "%s_%04d.wav", stem.c_str(), i);
            save_wav((root / "clips" / name).string(), clip);
            manifest << "clips/" << name << ',' << (cough ? "cough" : "non-cough") << ',' << split
                     << '\n';
        }
    };
    emit("train_cough", config.train_per_class, true, "train");
    emit("train_other", config.train_per_class, false, "train");
    emit("test_cough", config.test_per_class, true, "test");
    emit("test_other", config.test_per_class, false, "test");

    const fs::path manifest_path = root / "manifest.csv";
    std::ofstream out(manifest_path);
    if (!out) throw IoError("cannot write " + manifest_path.string());
    out << manifest.str();
    return manifest_path.string();
}

}  // namespace coughdet
