#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coughdet {

/// Fixed-format audio signal. `samples` is interleaved when `channels > 1`;
/// amplitudes are normalized to [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate = 0;
    int channels = 1;
    std::string source_id;

    std::size_t frames() const { return channels > 0 ? samples.size() / channels : 0; }
    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(frames()) / sample_rate : 0.0;
    }
};

/// Reads a RIFF/WAVE file (PCM16 or IEEE float32, 1-2 channels).
/// Stereo is kept interleaved; mixdown happens in to_mono_resample.
AudioClip load_wav(const std::string& path);

/// Writes a mono or interleaved-stereo clip as PCM16 WAV.
void save_wav(const std::string& path, const AudioClip& clip);

/// Averages channels to mono and resamples to target_rate with a
/// Hann-windowed-sinc polyphase interpolator. Mono input already at
/// target_rate is returned unchanged.
AudioClip to_mono_resample(const AudioClip& clip, int target_rate);

/// Center-crops long clips and symmetrically zero-pads short ones so the
/// result has exactly round(duration_s * sample_rate) samples. Mono only.
AudioClip fit_duration(const AudioClip& clip, double duration_s);

}  // namespace coughdet
