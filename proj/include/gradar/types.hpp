// Core value types shared across the gesture-radar pipeline.
//
// The stream model: every received channel-estimation packet yields one
// complex correlation sample per tap (a TapFrame). Tap index maps to
// round-trip distance; frame index maps to packet time.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradar {

using cplx = std::complex<double>;

// Speed of light, m/s.
inline constexpr double kSpeedOfLight = 2.99792458e8;

// Tap spacing is c / (2 * bandwidth): one tap per round-trip range cell.
// Channel bonding 1 = 1.76 GHz, channel bonding 2 = 3.52 GHz.
inline constexpr double kCb1Bandwidth = 1.76e9;
inline constexpr double kCb2Bandwidth = 3.52e9;

inline constexpr double cb1_tap_spacing() { return kSpeedOfLight / (2.0 * kCb1Bandwidth); }
inline constexpr double cb2_tap_spacing() { return kSpeedOfLight / (2.0 * kCb2Bandwidth); }

// Malformed sample layout (stream length, CE-field size, header mismatch).
class FramingError : public std::runtime_error {
public:
    explicit FramingError(const std::string& what) : std::runtime_error(what) {}
};

// Least-squares fit asked for with fewer than two distinct time points.
class DegenerateFitError : public std::runtime_error {
public:
    explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

// One correlation readout: a complex sample per tap at one packet time.
struct TapFrame {
    std::vector<cplx> taps;
    double timestamp = 0.0;    // seconds
    double tap_spacing = 0.0;  // meters per tap

    std::size_t tap_count() const { return taps.size(); }
};

// A processing batch: frames in strictly increasing time order.
struct Batch {
    std::vector<TapFrame> frames;

    std::size_t size() const { return frames.size(); }
    bool empty() const { return frames.empty(); }

    std::vector<double> times() const {
        std::vector<double> t;
        t.reserve(frames.size());
        for (const auto& f : frames) t.push_back(f.timestamp);
        return t;
    }
};

} // namespace gradar
