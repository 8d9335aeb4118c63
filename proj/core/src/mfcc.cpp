#include "coughdet/mfcc.hpp"

#include <cmath>
#include <numbers>

#include "coughdet/errors.hpp"
#include "coughdet/fft.hpp"

namespace coughdet {

namespace {
constexpr double kLogFloor = 1e-10;
constexpr int kDeltaWindow = 2;
}  // namespace

double hz_to_mel(double f) {
    if (f < 0) throw NegativeFrequency(std::to_string(f));
    return 2595.0 * std::log10(1.0 + f / 700.0);
}

double mel_to_hz(double mel) {
    if (mel < 0) throw NegativeFrequency(std::to_string(mel));
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

void MfccConfig::validate(int sample_rate) const {
    if (sample_rate <= 0) throw ConfigInvalid("sample rate must be positive");
    if (pre_emphasis < 0 || pre_emphasis >= 1) throw ConfigInvalid("pre_emphasis must be in [0,1)");
    if (frame_len_s <= 0 || hop_s <= 0 || hop_s > frame_len_s)
        throw ConfigInvalid("need 0 < hop_s <= frame_len_s");
    if (fft_size <= 0 || (fft_size & (fft_size - 1)) != 0)
        throw ConfigInvalid("fft_size must be a power of two");
    if (std::lround(frame_len_s * sample_rate) > fft_size)
        throw ConfigInvalid("frame longer than fft_size");
    if (!(fmin >= 0 && fmin < fmax && fmax <= sample_rate / 2.0))
        throw ConfigInvalid("need 0 <= fmin < fmax <= sample_rate/2");
    if (n_mel_filters < 2) throw ConfigInvalid("need at least 2 mel filters");
    if (n_cepstra < 1 || n_cepstra > n_mel_filters)
        throw ConfigInvalid("need 1 <= n_cepstra <= n_mel_filters");
}

std::vector<double> mel_filter_centers(const MfccConfig& config, int sample_rate) {
    config.validate(sample_rate);
    const double mel_lo = hz_to_mel(config.fmin);
    const double mel_hi = hz_to_mel(config.fmax);
    std::vector<double> centers(config.n_mel_filters);
    for (int i = 0; i < config.n_mel_filters; ++i) {
        const double mel = mel_lo + (mel_hi - mel_lo) * (i + 1) / (config.n_mel_filters + 1);
        centers[i] = mel_to_hz(mel);
    }
    return centers;
}

Eigen::MatrixXd mel_filterbank(const MfccConfig& config, int sample_rate) {
    config.validate(sample_rate);
    const int n_bins = config.fft_size / 2 + 1;
    const double bin_hz = static_cast<double>(sample_rate) / config.fft_size;

    const double mel_lo = hz_to_mel(config.fmin);
    const double mel_hi = hz_to_mel(config.fmax);
    // n_mel_filters + 2 edge points on the mel axis, quantized to FFT bins.
    std::vector<int> bins(config.n_mel_filters + 2);
    for (int i = 0; i < static_cast<int>(bins.size()); ++i) {
        const double mel = mel_lo + (mel_hi - mel_lo) * i / (config.n_mel_filters + 1);
        bins[i] = static_cast<int>(std::lround(mel_to_hz(mel) / bin_hz));
    }
    for (int i = 1; i + 1 < static_cast<int>(bins.size()); ++i) {
        if (bins[i] == bins[i + 1] || bins[i] == bins[i - 1])
            throw DegenerateBand("adjacent filter centers share FFT bin " + std::to_string(bins[i]));
    }

    Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(config.n_mel_filters, n_bins);
    for (int i = 0; i < config.n_mel_filters; ++i) {
        const int lo = bins[i], center = bins[i + 1], hi = bins[i + 2];
        for (int b = lo + 1; b <= center && b < n_bins; ++b)
            fb(i, b) = static_cast<double>(b - lo) / (center - lo);
        for (int b = center + 1; b < hi && b < n_bins; ++b)
            fb(i, b) = static_cast<double>(hi - b) / (hi - center);
    }
    return fb;
}

MfccMatrix compute_mfcc(const AudioClip& clip, const MfccConfig& config) {
    config.validate(clip.sample_rate);
    const auto frame_len = static_cast<std::size_t>(std::lround(config.frame_len_s * clip.sample_rate));
    const auto hop = static_cast<std::size_t>(std::lround(config.hop_s * clip.sample_rate));
    const auto n = clip.samples.size();
    if (n < frame_len) throw ClipTooShort("clip shorter than one frame");
    const std::size_t n_frames = (n - frame_len) / hop + 1;

    std::vector<double> emphasized(n);
    emphasized[0] = clip.samples[0];
    for (std::size_t i = 1; i < n; ++i)
        emphasized[i] = clip.samples[i] - config.pre_emphasis * clip.samples[i - 1];

    std::vector<double> window(frame_len);
    for (std::size_t i = 0; i < frame_len; ++i)
        window[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (frame_len - 1));

    const Eigen::MatrixXd fb = mel_filterbank(config, clip.sample_rate);
    const int n_bins = config.fft_size / 2 + 1;
    const int n_mel = config.n_mel_filters;

    // Orthonormal DCT-II basis, rows 1..n_cepstra (c0 dropped).
    Eigen::MatrixXd dct(config.n_cepstra, n_mel);
    for (int k = 1; k <= config.n_cepstra; ++k)
        for (int j = 0; j < n_mel; ++j)
            dct(k - 1, j) = std::sqrt(2.0 / n_mel) *
                            std::cos(std::numbers::pi * k * (2 * j + 1) / (2.0 * n_mel));

    MfccMatrix out;
    out.frame_hop_s = config.hop_s;
    out.values.resize(static_cast<Eigen::Index>(n_frames), config.n_cepstra);

    std::vector<double> frame(frame_len);
    Eigen::VectorXd power(n_bins), logmel(n_mel);
    for (std::size_t f = 0; f < n_frames; ++f) {
        for (std::size_t i = 0; i < frame_len; ++i)
            frame[i] = emphasized[f * hop + i] * window[i];
        const auto p = power_spectrum(frame, static_cast<std::size_t>(config.fft_size));
        for (int b = 0; b < n_bins; ++b) power(b) = p[b];
        const Eigen::VectorXd energies = fb * power;
        for (int m = 0; m < n_mel; ++m) logmel(m) = std::log(std::max(energies(m), kLogFloor));
        out.values.row(static_cast<Eigen::Index>(f)) = (dct * logmel).transpose();
    }
    return out;
}

MfccMatrix append_deltas(const MfccMatrix& m) {
    const Eigen::Index frames = m.values.rows();
    const Eigen::Index cols = m.values.cols();
    if (frames < 2 * kDeltaWindow + 1)
        throw TooFewFrames("need at least " + std::to_string(2 * kDeltaWindow + 1) + " frames");

    auto regression_delta = [&](const Eigen::MatrixXd& src) {
        Eigen::MatrixXd d(frames, cols);
        constexpr double denom = 2.0 * (1 * 1 + 2 * 2);
        for (Eigen::Index t = 0; t < frames; ++t) {
            Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(cols);
            for (int w = 1; w <= kDeltaWindow; ++w) {
                const Eigen::Index fwd = std::min(t + w, frames - 1);
                const Eigen::Index bwd = std::max<Eigen::Index>(t - w, 0);
                acc += w * (src.row(fwd) - src.row(bwd));
            }
            d.row(t) = acc / denom;
        }
        return d;
    };

    const Eigen::MatrixXd d1 = regression_delta(m.values);
    const Eigen::MatrixXd d2 = regression_delta(d1);

    MfccMatrix out;
    out.frame_hop_s = m.frame_hop_s;
    out.values.resize(frames, cols * 3);
    out.values << m.values, d1, d2;
    return out;
}

}  // namespace coughdet
