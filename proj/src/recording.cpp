#include "gradar/recording.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace gradar {

namespace {

constexpr std::array<char, 4> kMagic = {'G', 'T', 'A', 'P'};

void put_u32(std::ostream& out, std::uint32_t v) {
    const std::array<unsigned char, 4> bytes = {
        static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff), static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes.data()), 4);
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), 4);
    if (!in) throw FramingError("recording: truncated header");
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void put_f32(std::ostream& out, float v) {
    static_assert(sizeof(float) == 4);
    put_u32(out, std::bit_cast<std::uint32_t>(v));
}

float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

} // namespace

void write_recording(const TapRecording& recording, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("recording: cannot write " + path);

    const RecordingHeader& h = recording.header;
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, h.version);
    put_u32(out, h.n_taps);
    put_u32(out, h.tap_spacing_um);
    put_u32(out, h.sample_rate_hz);
    put_u32(out, h.pulses_per_reading);
    put_u32(out, h.frame_count);

    for (const TapFrame& frame : recording.frames) {
        if (frame.tap_count() != h.n_taps) {
            throw FramingError("recording: frame tap count does not match header");
        }
        for (const cplx& v : frame.taps) {
            put_f32(out, static_cast<float>(v.real()));
            put_f32(out, static_cast<float>(v.imag()));
        }
    }
    if (!out) throw std::runtime_error("recording: write failed for " + path);
}

TapRecording read_recording(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("recording: cannot open " + path);

    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw FramingError("recording: bad magic in " + path);

    TapRecording rec;
    RecordingHeader& h = rec.header;
    h.version = get_u32(in);
    if (h.version != 1) {
        throw FramingError("recording: unsupported version " + std::to_string(h.version));
    }
    h.n_taps = get_u32(in);
    h.tap_spacing_um = get_u32(in);
    h.sample_rate_hz = get_u32(in);
    h.pulses_per_reading = get_u32(in);
    h.frame_count = get_u32(in);
    if (h.n_taps == 0) throw FramingError("recording: header has zero taps");
    if (h.sample_rate_hz == 0) throw FramingError("recording: header has zero sample rate");

    const double dt = 1.0 / static_cast<double>(h.sample_rate_hz);
    rec.frames.resize(h.frame_count);
    for (std::uint32_t k = 0; k < h.frame_count; ++k) {
        TapFrame& frame = rec.frames[k];
        frame.timestamp = static_cast<double>(k) * dt;
        frame.tap_spacing = h.tap_spacing_m();
        frame.taps.resize(h.n_taps);
        for (std::uint32_t i = 0; i < h.n_taps; ++i) {
            const float re = get_f32(in);
            const float im = get_f32(in);
            frame.taps[i] = cplx(re, im);
        }
    }
    return rec;
}

TapRecording make_recording(const std::vector<TapFrame>& frames, double tap_spacing,
                            double sample_rate, std::uint32_t pulses_per_reading) {
    TapRecording rec;
    rec.header.n_taps = frames.empty() ? 0 : static_cast<std::uint32_t>(frames.front().tap_count());
    rec.header.tap_spacing_um = static_cast<std::uint32_t>(std::lround(tap_spacing * 1e6));
    rec.header.sample_rate_hz = static_cast<std::uint32_t>(std::lround(sample_rate));
    rec.header.pulses_per_reading = pulses_per_reading;
    rec.header.frame_count = static_cast<std::uint32_t>(frames.size());

    const double dt = 1.0 / static_cast<double>(rec.header.sample_rate_hz);
    rec.frames = frames;
    for (std::size_t k = 0; k < rec.frames.size(); ++k) {
        // Quantize the payload to the storage precision up front so the
        // in-memory recording equals its own round trip.
        rec.frames[k].timestamp = static_cast<double>(k) * dt;
        rec.frames[k].tap_spacing = rec.header.tap_spacing_m();
        for (cplx& v : rec.frames[k].taps) {
            // volatile: GCC 11 at -O3 folds the double->float->double
            // narrowing away on the vectorized loop's remainder element.
            volatile float re = static_cast<float>(v.real());
            volatile float im = static_cast<float>(v.imag());
            v = cplx(re, im);
        }
    }
    return rec;
}

} // namespace gradar
