// Slider-control tracking: a clamped integrator over filtered phase
// slopes, gated by target presence and a slope sanity threshold.
//
// Per-tap levels are maintained so the average strategy can fuse them;
// the emitted level is a single tracker driven by the strategy-selected
// slope (strongest tap, average slope, or fastest-moving tap). Outward
// motion lowers the level by default; invert_polarity flips that.

#pragma once

#include "gradar/types.hpp"

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace gradar {

enum class TapStrategy { max_magnitude, average, max_slope };
enum class PresenceRule { magnitude, magnitude_std };

struct TrackerConfig {
    double range = 100.0;              // L: level clamps to [-L, L]
    double attenuation = 6.4;          // alpha
    double slope_gate_threshold = 1.5; // s_Th, rad/sample
    double magnitude_threshold = 0.3;  // M_Th
    double std_threshold = 0.05;       // M_Th^s
    std::size_t std_window = 16;       // N_s
    TapStrategy tap_strategy = TapStrategy::max_magnitude;
    PresenceRule presence_rule = PresenceRule::magnitude;
    bool invert_polarity = false;
};

struct SliderSample {
    double time = 0.0;
    double level = 0.0;
    bool enabled = false;
    bool present = false;
    int tap = -1;  // selected tap, -1 for the average strategy
};

// clamp(prev + attenuation * slope, -range, range)
double tracker_update(double prev_level, double slope, const TrackerConfig& cfg);

// Lowest index among ties. Throws std::invalid_argument on empty input.
std::size_t select_tap_max_magnitude(std::span<const cplx> taps);
std::size_t select_tap_max_slope(std::span<const double> slopes);

double fuse_average(std::span<const double> values);

// True iff every |slope| is strictly below the threshold.
bool slope_gate(std::span<const double> slopes, double threshold);

// True iff some tap magnitude strictly exceeds the threshold.
bool presence_by_magnitude(std::span<const cplx> taps, double threshold);

// Unbiased sample standard deviation; zero for fewer than two samples.
double sample_std(std::span<const double> values);

// True iff some tap's magnitude-history std strictly exceeds the
// threshold. Live targets vibrate; static clutter does not.
bool presence_by_std(std::span<const std::vector<double>> per_tap_history, double threshold);

class SliderTracker {
public:
    SliderTracker(TrackerConfig cfg, std::size_t n_taps);

    // Feed every frame so magnitude histories stay current.
    void observe_frame(const TapFrame& frame);

    // One tracking step with the per-tap filtered slopes of the current
    // fit group; frame supplies magnitudes for gating and tap selection.
    SliderSample step(const TapFrame& frame, std::span<const double> per_tap_slopes);

    double level() const { return level_; }
    std::span<const double> tap_levels() const { return tap_levels_; }
    const TrackerConfig& config() const { return cfg_; }
    void reset();

private:
    bool presence(const TapFrame& frame) const;

    TrackerConfig cfg_;
    std::size_t n_taps_;
    double level_ = 0.0;
    std::vector<double> tap_levels_;
    std::vector<std::deque<double>> magnitude_history_;
};

} // namespace gradar
