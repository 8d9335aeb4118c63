#include <doctest.h>

#include <cmath>
#include <numbers>

#include "coughdet/errors.hpp"
#include "coughdet/fft.hpp"
#include "coughdet/mfcc.hpp"
#include "coughdet/synth.hpp"
#include "mfcc_oracle.hpp"
#include "test_util.hpp"

using namespace coughdet;

TEST_CASE("hz_to_mel hits the reference points") {
    CHECK(hz_to_mel(0.0) == 0.0);
    CHECK(std::abs(hz_to_mel(700.0) - 781.17) < 0.01);
    CHECK(std::abs(hz_to_mel(8000.0) - 2840.02) < 0.01);
}

TEST_CASE("hz_to_mel and mel_to_hz are inverse and monotonic") {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double f = 24000.0 * i / 1000.0;
        const double m = hz_to_mel(f);
        REQUIRE(m > prev);
        prev = m;
        const double back = mel_to_hz(m);
        REQUIRE(std::abs(back - f) <= 1e-9 * std::max(1.0, f));
    }
    CHECK_THROWS_AS(hz_to_mel(-1.0), NegativeFrequency);
    CHECK_THROWS_AS(mel_to_hz(-1.0), NegativeFrequency);
}

TEST_CASE("mel filter centers are equally spaced on the mel axis") {
    const MfccConfig config;
    const auto centers = mel_filter_centers(config, 16000);
    REQUIRE(centers.size() == 26);
    const double step = hz_to_mel(centers[1]) - hz_to_mel(centers[0]);
    for (std::size_t i = 1; i < centers.size(); ++i) {
        const double d = hz_to_mel(centers[i]) - hz_to_mel(centers[i - 1]);
        REQUIRE(std::abs(d - step) < 1e-9);
    }
    // Edge-to-center spacing matches too: centers sit at interior points of
    // an (n_mel+2)-point grid from fmin to fmax.
    const double full = hz_to_mel(config.fmax) - hz_to_mel(config.fmin);
    CHECK(step == doctest::Approx(full / (config.n_mel_filters + 1)).epsilon(1e-12));
}

TEST_CASE("mel filterbank rows peak at 1.0 and cover the band") {
    const MfccConfig config;
    const Eigen::MatrixXd fb = mel_filterbank(config, 16000);
    REQUIRE(fb.rows() == 26);
    REQUIRE(fb.cols() == 257);
    CHECK((fb.array() >= 0.0).all());

    const auto centers = mel_filter_centers(config, 16000);
    const double bin_hz = 16000.0 / config.fft_size;
    for (int i = 0; i < fb.rows(); ++i) {
        Eigen::Index peak = 0;
        const double peak_val = fb.row(i).maxCoeff(&peak);
        REQUIRE(peak_val == 1.0);
        REQUIRE(peak == std::lround(centers[static_cast<std::size_t>(i)] / bin_hz));
    }

    // Every bin strictly inside (first_center, last_center) is covered.
    const auto lo = static_cast<Eigen::Index>(std::lround(centers.front() / bin_hz));
    const auto hi = static_cast<Eigen::Index>(std::lround(centers.back() / bin_hz));
    for (Eigen::Index b = lo; b <= hi; ++b) REQUIRE(fb.col(b).sum() > 0.0);
}

TEST_CASE("mel filterbank detects collapsed bands") {
    MfccConfig config;
    config.fmax = 200.0;  // 26 filters in 200 Hz cannot keep distinct bins
    CHECK_THROWS_AS(mel_filterbank(config, 16000), DegenerateBand);
}

TEST_CASE("compute_mfcc frame count for 5 s at 16 kHz is 498") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples = testutil::sine(350.0, 16000, 5.0);
    const MfccMatrix m = compute_mfcc(clip, MfccConfig{});
    CHECK(m.values.rows() == 498);
    CHECK(m.values.cols() == 12);
    CHECK(m.values.allFinite());
}

TEST_CASE("compute_mfcc on silence yields identical floor-driven frames") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples.assign(16000, 0.0);
    const MfccMatrix m = compute_mfcc(clip, MfccConfig{});
    REQUIRE(m.values.rows() > 1);
    for (Eigen::Index f = 1; f < m.values.rows(); ++f)
        REQUIRE((m.values.row(f).array() == m.values.row(0).array()).all());
    CHECK(m.values.allFinite());
}

TEST_CASE("compute_mfcc is deterministic") {
    const AudioClip clip = synth_cough_clip(16000, 1.0, 42);
    const MfccMatrix a = compute_mfcc(clip, MfccConfig{});
    const MfccMatrix b = compute_mfcc(clip, MfccConfig{});
    CHECK((a.values.array() == b.values.array()).all());
}

TEST_CASE("compute_mfcc rejects clips shorter than one frame") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples.assign(100, 0.1);
    CHECK_THROWS_AS(compute_mfcc(clip, MfccConfig{}), ClipTooShort);
}

TEST_CASE("compute_mfcc is invariant to global gain") {
    const AudioClip clip = synth_cough_clip(16000, 1.0, 7);
    AudioClip scaled = clip;
    for (auto& s : scaled.samples) s *= 3.0;
    const MfccMatrix a = compute_mfcc(clip, MfccConfig{});
    const MfccMatrix b = compute_mfcc(scaled, MfccConfig{});
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("power spectrum of a bin-centered sine concentrates in +-1 bin") {
    const std::size_t n = 512;
    const int bin = 40;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hamming =
            0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n - 1));
        x[i] = hamming * std::sin(2.0 * std::numbers::pi * bin * static_cast<double>(i) / n);
    }
    const auto p = power_spectrum(x, n);
    double total = 0.0, near = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        total += p[k];
        if (std::abs(static_cast<int>(k) - bin) <= 1) near += p[k];
    }
    CHECK(near / total >= 0.99);
}

TEST_CASE("append_deltas of constants is zero and of a ramp is one") {
    MfccMatrix m;
    m.frame_hop_s = 0.01;
    m.values = Eigen::MatrixXd::Constant(10, 12, 3.5);
    const MfccMatrix flat = append_deltas(m);
    REQUIRE(flat.values.cols() == 36);
    CHECK(flat.values.rightCols(24).cwiseAbs().maxCoeff() == 0.0);

    for (Eigen::Index f = 0; f < 10; ++f)
        m.values.row(f).setConstant(static_cast<double>(f));
    const MfccMatrix ramp = append_deltas(m);
    for (Eigen::Index f = 2; f < 8; ++f)
        for (Eigen::Index c = 12; c < 24; ++c)
            REQUIRE(ramp.values(f, c) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("append_deltas needs at least five frames") {
    MfccMatrix m;
    m.values = Eigen::MatrixXd::Zero(4, 12);
    CHECK_THROWS_AS(append_deltas(m), TooFewFrames);
}

TEST_CASE("compute_mfcc matches the direct-DFT oracle") {
    const MfccConfig config;
    mfcc_oracle::Params params;  // defaults mirror the production defaults
    for (const std::uint64_t seed : {11ULL, 12ULL}) {
        const AudioClip clip = seed % 2 ? synth_cough_clip(16000, 1.0, seed)
                                        : synth_noncough_clip(16000, 1.0, seed);
        const MfccMatrix fast = compute_mfcc(clip, config);
        const Eigen::MatrixXd slow = mfcc_oracle::compute(clip.samples, 16000, params);
        REQUIRE(fast.values.rows() == slow.rows());
        REQUIRE(fast.values.cols() == slow.cols());
        REQUIRE((fast.values - slow).cwiseAbs().maxCoeff() < 1e-6);
    }
}
