#pragma once

#include <cstdint>
#include <string>

#include "coughdet/audio.hpp"

namespace coughdet {

struct SynthConfig {
    int train_per_class = 200;
    int test_per_class = 60;
    int sample_rate = 16000;
    double duration_s = 5.0;
    std::uint64_t seed = 0;
};

/// Deterministic one-clip generators. Cough-like clips are bursts of
/// broadband noise with sharp attack and fast decay over a quiet floor;
/// non-cough clips are tones, hums, and stationary noise.
AudioClip synth_cough_clip(int sample_rate, double duration_s, std::uint64_t seed);
AudioClip synth_noncough_clip(int sample_rate, double duration_s, std::uint64_t seed);

/// Writes WAVs under <out_dir>/clips/ and a manifest at
/// <out_dir>/manifest.csv; returns the manifest path.
std::string generate_synth_corpus(const std::string& out_dir, const SynthConfig& config);

}  // namespace coughdet
