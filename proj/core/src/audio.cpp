#include "coughdet/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "coughdet/errors.hpp"

namespace coughdet {

namespace {

uint32_t read_u32(const unsigned char* p) {
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}
uint16_t read_u16(const unsigned char* p) { return uint16_t(p[0]) | uint16_t(p[1]) << 8; }

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedWav("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

AudioClip load_wav(const std::string& path) {
    const auto buf = read_file(path);
    if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
        std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
        throw MalformedWav(path + ": not a RIFF/WAVE file");
    }

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    bool have_fmt = false;
    const unsigned char* data = nullptr;
    uint32_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= buf.size()) {
        const char* id = reinterpret_cast<const char*>(buf.data() + pos);
        const uint32_t len = read_u32(buf.data() + pos + 4);
        if (pos + 8 + len > buf.size()) {
            throw MalformedWav(path + ": chunk '" + std::string(id, 4) +
                               "' extends past end of file");
        }
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) throw MalformedWav(path + ": fmt chunk too short");
            const unsigned char* f = buf.data() + pos + 8;
            format = read_u16(f);
            channels = read_u16(f + 2);
            rate = read_u32(f + 4);
            bits = read_u16(f + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = buf.data() + pos + 8;
            data_len = len;
        }
        pos += 8 + len + (len & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) throw MalformedWav(path + ": missing fmt or data chunk");
    if (channels < 1 || channels > 2)
        throw UnsupportedEncoding(path + ": " + std::to_string(channels) + " channels");
    if (rate == 0) throw MalformedWav(path + ": zero sample rate");

    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.channels = channels;
    clip.source_id = path;

    if (format == 1 && bits == 16) {
        const std::size_t n = data_len / 2;
        if (data_len % (2u * channels) != 0)
            throw MalformedWav(path + ": data size not a multiple of the frame size");
        clip.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int16_t v = static_cast<int16_t>(read_u16(data + 2 * i));
            clip.samples[i] = static_cast<double>(v) / 32768.0;
        }
    } else if (format == 3 && bits == 32) {
        const std::size_t n = data_len / 4;
        if (data_len % (4u * channels) != 0)
            throw MalformedWav(path + ": data size not a multiple of the frame size");
        clip.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const uint32_t u = read_u32(data + 4 * i);
            float f;
            std::memcpy(&f, &u, 4);
            clip.samples[i] = std::clamp(static_cast<double>(f), -1.0, 1.0);
        }
    } else {
        throw UnsupportedEncoding(path + ": format tag " + std::to_string(format) + ", " +
                                  std::to_string(bits) + " bits");
    }

    if (clip.samples.empty()) throw EmptyAudio(path + ": zero frames");
    return clip;
}

void save_wav(const std::string& path, const AudioClip& clip) {
    const uint32_t data_len = static_cast<uint32_t>(clip.samples.size() * 2);
    const uint32_t byte_rate = clip.sample_rate * clip.channels * 2;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);

    auto put_u32 = [&](uint32_t v) {
        char b[4] = {char(v), char(v >> 8), char(v >> 16), char(v >> 24)};
        out.write(b, 4);
    };
    auto put_u16 = [&](uint16_t v) {
        char b[2] = {char(v), char(v >> 8)};
        out.write(b, 2);
    };

    out.write("RIFF", 4);
    put_u32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(1);  // PCM
    put_u16(static_cast<uint16_t>(clip.channels));
    put_u32(static_cast<uint32_t>(clip.sample_rate));
    put_u32(byte_rate);
    put_u16(static_cast<uint16_t>(clip.channels * 2));
    put_u16(16);
    out.write("data", 4);
    put_u32(data_len);
    for (double s : clip.samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        const int v = static_cast<int>(std::lround(clamped * 32767.0));
        put_u16(static_cast<uint16_t>(static_cast<int16_t>(v)));
    }
}

AudioClip to_mono_resample(const AudioClip& clip, int target_rate) {
    if (clip.samples.empty()) throw EmptyAudio(clip.source_id);
    if (target_rate <= 0) throw ConfigInvalid("target rate must be positive");

    AudioClip mono;
    mono.sample_rate = clip.sample_rate;
    mono.channels = 1;
    mono.source_id = clip.source_id;
    if (clip.channels == 1) {
        mono.samples = clip.samples;
    } else {
        const std::size_t n = clip.frames();
        mono.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            mono.samples[i] = 0.5 * (clip.samples[2 * i] + clip.samples[2 * i + 1]);
    }
    if (mono.sample_rate == target_rate) return mono;

    const double ratio = static_cast<double>(target_rate) / mono.sample_rate;
    const std::size_t out_len =
        static_cast<std::size_t>(std::lround(static_cast<double>(mono.samples.size()) * ratio));

    // Windowed sinc, cutoff at the lower of the two Nyquist frequencies.
    const double cutoff = 0.5 * std::min(1.0, ratio);
    const double half_width = 24.0 / std::min(1.0, ratio);

    AudioClip out;
    out.sample_rate = target_rate;
    out.channels = 1;
    out.source_id = clip.source_id;
    out.samples.resize(out_len);

    const auto& x = mono.samples;
    const auto n_in = static_cast<std::ptrdiff_t>(x.size());
    for (std::size_t n = 0; n < out_len; ++n) {
        const double t = static_cast<double>(n) / ratio;
        const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(t - half_width)));
        const auto hi = std::min<std::ptrdiff_t>(n_in - 1, static_cast<std::ptrdiff_t>(std::floor(t + half_width)));
        double acc = 0.0;
        for (std::ptrdiff_t m = lo; m <= hi; ++m) {
            const double d = t - static_cast<double>(m);
            const double u = 2.0 * cutoff * d;
            const double sinc = (std::abs(u) < 1e-12) ? 1.0 : std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
            const double win = 0.5 + 0.5 * std::cos(std::numbers::pi * d / half_width);
            acc += x[m] * 2.0 * cutoff * sinc * win;
        }
        out.samples[n] = std::clamp(acc, -1.0, 1.0);
    }
    return out;
}

AudioClip fit_duration(const AudioClip& clip, double duration_s) {
    if (duration_s <= 0) throw ConfigInvalid("duration must be positive");
    const auto target = static_cast<std::size_t>(std::lround(duration_s * clip.sample_rate));

    AudioClip out;
    out.sample_rate = clip.sample_rate;
    out.channels = 1;
    out.source_id = clip.source_id;

    const auto n = clip.samples.size();
    if (n == target) {
        out.samples = clip.samples;
    } else if (n > target) {
        const std::size_t offset = (n - target) / 2;
        out.samples.assign(clip.samples.begin() + offset, clip.samples.begin() + offset + target);
    } else {
        const std::size_t pad = target - n;
        const std::size_t lead = pad / 2;
        out.samples.assign(target, 0.0);
        std::copy(clip.samples.begin(), clip.samples.end(), out.samples.begin() + lead);
    }
    return out;
}

}  // namespace coughdet
