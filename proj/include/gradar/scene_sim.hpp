// Synthetic radar scenes: point targets on piecewise-linear range
// trajectories, observed as per-tap complex echoes.
//
// Per packet time t and tap i the simulated sample is
//     sum over targets mapping to tap i of  alpha_t * A * exp(j*phi(t))
//   + thermal noise,
// with phi(t) = -4*pi*r(t)/wavelength (two-way path) and alpha_t a
// multiplicative instability factor: at exponentially spaced event times
// the factor picks up a random phase rotation and gain step, and holds
// constant in between. Streams are bit-reproducible for a given seed.

#pragma once

#include "gradar/golay.hpp"
#include "gradar/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gradar {

struct InstabilityModel {
    double event_rate = 0.0;         // events per second
    double phase_jitter_scale = 0.0; // radians, rotation uniform in +/- scale
    double gain_jitter_scale = 0.0;  // relative gain step uniform in +/- scale

    bool active() const {
        return event_rate > 0.0 && (phase_jitter_scale > 0.0 || gain_jitter_scale > 0.0);
    }
};

struct Keyframe {
    double time = 0.0;   // seconds
    double range = 0.0;  // meters
};

struct Target {
    std::vector<Keyframe> keyframes;  // sorted by time; held flat outside the span
    double amplitude = 1.0;
    InstabilityModel instability;

    double range_at(double t) const;
};

struct RadioConfig {
    double wavelength = 0.005;              // meters (60 GHz)
    double tap_spacing = cb1_tap_spacing(); // meters per tap
    double packet_rate = 500.0;             // readings per second
    std::size_t n_taps = 5;
    std::size_t pulses_per_reading = 16;    // combined upstream; metadata here
    double noise_variance = 0.0;            // E|n|^2 per tap per reading
};

struct Scene {
    std::vector<Target> targets;
    RadioConfig radio;
    std::uint64_t seed = 1;
    double duration = 1.0;  // seconds
};

// Tap index a range maps to (nearest tap, no straddling), or -1 when the
// range falls outside the observed span.
int range_to_tap(double range, const RadioConfig& radio);

// Per-reading tap frames for the full scene duration. Targets whose range
// leaves the observed span simply vanish from all taps; that is not an
// error. Deterministic given scene.seed.
std::vector<TapFrame> simulate_tap_stream(const Scene& scene);

// Raw channel-estimation field per reading. Running channel_estimate on a
// block reproduces the tap-stream sample scaled by 2N (the correlation
// gain), with matching per-tap SNR. Target delays quantize to the
// nearest tap.
std::vector<std::vector<cplx>> simulate_ce_waveform(const Scene& scene, const GolayPair& pair);

enum class GestureKind { idle, slider_in, slider_out, two_finger, swipe };

struct GestureParams {
    double speed = 0.05;          // m/s (per finger for two_finger)
    double duration = 1.0;        // total scene seconds
    double start_range = 0.20;    // m; palm range for two_finger
    double amplitude = 1.0;       // gesture target echo magnitude
    double palm_amplitude = 3.0;  // two_finger only
    double lead_in = 0.1;         // static seconds before motion starts
    double motion_duration = 0.0; // 0 = move until the scene ends
    double noise_variance = 0.0;
    InstabilityModel instability;
    std::uint64_t seed = 1;
};

// Canonical scenes used by tests and demos. Throws std::invalid_argument
// when parameters leave the physical envelope (speed <= 2 m/s, ranges
// within 0.4 m).
Scene make_gesture_scene(GestureKind kind, const GestureParams& params);

GestureKind gesture_kind_from_string(const std::string& name);

// Scene description file (JSON): see README for the schema. Parse or
// validation problems throw std::invalid_argument naming the field.
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);
Scene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const Scene& scene);

} // namespace gradar
