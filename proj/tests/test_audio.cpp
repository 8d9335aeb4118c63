#include <doctest.h>

#include <cmath>
#include <cstring>

#include "coughdet/audio.hpp"
#include "coughdet/errors.hpp"
#include "coughdet/fft.hpp"
#include "coughdet/manifest.hpp"
#include "test_util.hpp"

using namespace coughdet;
using testutil::TempDir;

TEST_CASE("load_wav scales PCM16 linearly") {
    TempDir dir("wav");
    const auto path = dir.file("one.wav");
    testutil::write_bytes(path, testutil::pcm16_wav_bytes({16384}, 16000, 1));
    const AudioClip clip = load_wav(path);
    REQUIRE(clip.samples.size() == 1);
    CHECK(clip.samples[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(clip.sample_rate == 16000);
    CHECK(clip.channels == 1);
}

TEST_CASE("load_wav reads silence at the declared rate") {
    TempDir dir("wav");
    const auto path = dir.file("silence.wav");
    testutil::write_bytes(path, testutil::pcm16_wav_bytes(std::vector<std::int16_t>(80000, 0),
                                                          16000, 1));
    const AudioClip clip = load_wav(path);
    CHECK(clip.samples.size() == 80000);
    CHECK(clip.sample_rate == 16000);
    for (const double s : clip.samples) REQUIRE(s == 0.0);
}

TEST_CASE("load_wav rejects a data chunk longer than the file") {
    TempDir dir("wav");
    const auto path = dir.file("short.wav");
    testutil::write_bytes(path, testutil::pcm16_wav_bytes({1, 2, 3}, 16000, 1, 4096));
    CHECK_THROWS_AS(load_wav(path), MalformedWav);
}

TEST_CASE("load_wav rejects unsupported encodings") {
    TempDir dir("wav");
    const auto path = dir.file("adpcm.wav");
    auto bytes = testutil::pcm16_wav_bytes({1, 2, 3}, 16000, 1);
    bytes[20] = 2;  // format tag: MS ADPCM
    testutil::write_bytes(path, bytes);
    CHECK_THROWS_AS(load_wav(path), UnsupportedEncoding);
}

TEST_CASE("load_wav rejects an empty data chunk") {
    TempDir dir("wav");
    const auto path = dir.file("empty.wav");
    testutil::write_bytes(path, testutil::pcm16_wav_bytes({}, 16000, 1));
    CHECK_THROWS_AS(load_wav(path), EmptyAudio);
}

TEST_CASE("load_wav reads IEEE float32 samples verbatim") {
    TempDir dir("wav");
    const auto path = dir.file("f32.wav");
    const std::vector<float> samples = {0.25f, -0.5f, 1.0f, -1.0f, 0.0f};
    testutil::write_bytes(path, testutil::float32_wav_bytes(samples, 22050, 1));
    const AudioClip clip = load_wav(path);
    REQUIRE(clip.samples.size() == samples.size());
    CHECK(clip.sample_rate == 22050);
    for (std::size_t i = 0; i < samples.size(); ++i)
        CHECK(clip.samples[i] == doctest::Approx(samples[i]).epsilon(1e-7));
}

TEST_CASE("save_wav then load_wav round-trips within quantization") {
    TempDir dir("wav");
    const auto path = dir.file("rt.wav");
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples = testutil::sine(440.0, 16000, 0.1, 0.7);
    save_wav(path, clip);
    const AudioClip back = load_wav(path);
    REQUIRE(back.samples.size() == clip.samples.size());
    CHECK(back.sample_rate == 16000);
    // Writer scales by 32767, reader divides by 32768: up to |v|/32768 of
    // scale skew on top of half-step quantization error.
    for (std::size_t i = 0; i < clip.samples.size(); ++i)
        REQUIRE(std::abs(back.samples[i] - clip.samples[i]) < 1.5 / 32768.0 + 1e-9);
}

TEST_CASE("to_mono_resample is an identity for mono input at the target rate") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples = testutil::sine(500.0, 16000, 0.05);
    const AudioClip out = to_mono_resample(clip, 16000);
    CHECK(out.samples == clip.samples);
    CHECK(out.channels == 1);
}

TEST_CASE("to_mono_resample averages stereo channels") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.channels = 2;
    for (int i = 0; i < 100; ++i) {
        clip.samples.push_back(0.2);
        clip.samples.push_back(0.4);
    }
    const AudioClip out = to_mono_resample(clip, 16000);
    REQUIRE(out.samples.size() == 100);
    CHECK(out.channels == 1);
    for (const double s : out.samples) REQUIRE(s == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("resampling a 440 Hz sine keeps the spectral peak at 440 Hz") {
    AudioClip clip;
    clip.sample_rate = 44100;
    clip.samples = testutil::sine(440.0, 44100, 1.0);
    const AudioClip out = to_mono_resample(clip, 16000);
    REQUIRE(out.sample_rate == 16000);
    REQUIRE(out.samples.size() > 9000);

    // Interior window to stay clear of filter edge effects.
    const std::size_t n = 8192;
    const std::size_t start = (out.samples.size() - n) / 2;
    const std::vector<double> mid(out.samples.begin() + static_cast<long>(start),
                                  out.samples.begin() + static_cast<long>(start + n));
    const auto spectrum = power_spectrum(mid, n);
    std::size_t peak = 0;
    for (std::size_t k = 1; k < spectrum.size(); ++k)
        if (spectrum[k] > spectrum[peak]) peak = k;
    const double expected_bin = 440.0 * static_cast<double>(n) / 16000.0;
    CHECK(std::abs(static_cast<double>(peak) - expected_bin) <= 1.0);
}

TEST_CASE("fit_duration leaves an exact-length clip untouched") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples.assign(80000, 0.25);
    const AudioClip out = fit_duration(clip, 5.0);
    CHECK(out.samples == clip.samples);
}

TEST_CASE("fit_duration pads short clips symmetrically") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples.assign(48000, 0.5);
    const AudioClip out = fit_duration(clip, 5.0);
    REQUIRE(out.samples.size() == 80000);
    for (std::size_t i = 0; i < 16000; ++i) REQUIRE(out.samples[i] == 0.0);
    for (std::size_t i = 16000; i < 64000; ++i) REQUIRE(out.samples[i] == 0.5);
    for (std::size_t i = 64000; i < 80000; ++i) REQUIRE(out.samples[i] == 0.0);
}

TEST_CASE("fit_duration center-crops long clips") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples.resize(112000);
    for (std::size_t i = 0; i < clip.samples.size(); ++i)
        clip.samples[i] = static_cast<double>(i);
    const AudioClip out = fit_duration(clip, 5.0);
    REQUIRE(out.samples.size() == 80000);
    for (std::size_t i = 0; i < 80000; ++i)
        REQUIRE(out.samples[i] == static_cast<double>(i + 16000));
}

TEST_CASE("fit_duration is idempotent") {
    AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples = testutil::sine(300.0, 16000, 3.2);
    const AudioClip once = fit_duration(clip, 5.0);
    const AudioClip twice = fit_duration(once, 5.0);
    CHECK(once.samples == twice.samples);
}

TEST_CASE("parse_manifest reads entries in order") {
    const auto m = parse_manifest(
        "path,label,split\n"
        "clips/c001.wav,cough,train\n"
        "clips/n001.wav,non-cough,test\n"
        "clips/c002.wav,cough,train\n");
    REQUIRE(m.entries.size() == 3);
    CHECK(m.entries[0].path == "clips/c001.wav");
    CHECK(m.entries[0].label == Label::cough);
    CHECK(m.entries[0].split == Split::train);
    CHECK(m.entries[1].label == Label::non_cough);
    CHECK(m.entries[1].split == Split::test);
    CHECK(m.entries[2].path == "clips/c002.wav");

    const auto summary = m.split_summary();
    CHECK(summary.train == 2);
    CHECK(summary.test == 1);
    REQUIRE(m.split(Split::test).size() == 1);
    CHECK(m.split(Split::test)[0].path == "clips/n001.wav");
}

TEST_CASE("parse_manifest rejects bad rows") {
    CHECK_THROWS_AS(parse_manifest("path,label,split\na.wav,sneeze,train\n"), UnknownLabel);
    CHECK_THROWS_AS(parse_manifest("path,label,split\na.wav,cough,validation\n"), UnknownSplit);
    CHECK_THROWS_AS(
        parse_manifest("path,label,split\na.wav,cough,train\na.wav,cough,test\n"),
        DuplicatePath);
    CHECK_THROWS_AS(parse_manifest("path,label\na.wav,cough\n"), MissingColumn);
}
