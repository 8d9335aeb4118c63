#pragma once

#include <Eigen/Dense>
#include <vector>

#include "coughdet/audio.hpp"

namespace coughdet {

struct MfccConfig {
    double pre_emphasis = 0.97;
    double frame_len_s = 0.025;
    double hop_s = 0.010;
    int fft_size = 512;
    int n_mel_filters = 26;
    int n_cepstra = 12;
    bool include_deltas = true;
    double fmin = 0.0;
    double fmax = 8000.0;

    int n_columns() const { return n_cepstra * (include_deltas ? 3 : 1); }
    void validate(int sample_rate) const;
    bool operator==(const MfccConfig&) const = default;
};

struct MfccMatrix {
    Eigen::MatrixXd values;  // frames x coeffs
    double frame_hop_s = 0.0;
};

double hz_to_mel(double f);
double mel_to_hz(double mel);

/// Exact (unquantized) center frequencies of the triangular filters, equally
/// spaced on the mel axis between fmin and fmax.
std::vector<double> mel_filter_centers(const MfccConfig& config, int sample_rate);

/// Triangular mel filterbank, n_mel_filters x (fft_size/2 + 1).
/// Each row peaks at exactly 1.0 on its center bin.
Eigen::MatrixXd mel_filterbank(const MfccConfig& config, int sample_rate);

/// Full cepstral chain: pre-emphasis, framing, Hamming window, power
/// spectrum, filterbank energies, floored log, orthonormal DCT-II, c0
/// dropped. Does not append deltas; see append_deltas.
MfccMatrix compute_mfcc(const AudioClip& clip, const MfccConfig& config);

/// Appends first- and second-order regression deltas (window +-2, edge
/// frames replicated), tripling the column count.
MfccMatrix append_deltas(const MfccMatrix& m);

}  // namespace coughdet
