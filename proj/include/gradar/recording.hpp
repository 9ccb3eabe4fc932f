// Tap-stream recording file ("GTAP"): a little-endian binary container
// for per-packet correlation tap frames.
//
// Layout, all header fields 32-bit unsigned little-endian:
//   magic "GTAP" | version | n_taps | tap_spacing_um | sample_rate_hz
//   | pulses_per_reading | frame_count
// followed by frame_count * n_taps complex samples as interleaved
// 32-bit floats (real, imag), frames contiguous. Tap spacing is stored
// in micrometers so the header stays integer-only. Timestamps are
// implicit: frame k is at k / sample_rate_hz seconds.

#pragma once

#include "gradar/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gradar {

struct RecordingHeader {
    std::uint32_t version = 1;
    std::uint32_t n_taps = 0;
    std::uint32_t tap_spacing_um = 0;
    std::uint32_t sample_rate_hz = 0;
    std::uint32_t pulses_per_reading = 0;
    std::uint32_t frame_count = 0;

    double tap_spacing_m() const { return static_cast<double>(tap_spacing_um) * 1e-6; }
};

struct TapRecording {
    RecordingHeader header;
    std::vector<TapFrame> frames;
};

// Serialization errors (bad magic, truncated payload) throw FramingError;
// I/O failures throw std::runtime_error.
void write_recording(const TapRecording& recording, const std::string& path);
TapRecording read_recording(const std::string& path);

// Builds header + frames from a simulated stream. Frame timestamps are
// re-derived from the sample rate so a write/read round trip is exact.
TapRecording make_recording(const std::vector<TapFrame>& frames, double tap_spacing,
                            double sample_rate, std::uint32_t pulses_per_reading);

} // namespace gradar
