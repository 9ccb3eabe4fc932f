// Two-finger gesture detection via spectral analysis of one tap's
// complex time series.
//
// Two fingers moving in opposite radial directions put Doppler lines in
// both the positive and the negative frequency band at once; a single
// target can only ever light up one side. The detector counts strong
// bins in each DC-excluded band (AND rule), discards windows that look
// like a fast swipe (phase excursion, slope, or high-frequency energy),
// and requires several consecutive positive windows before emitting an
// event.

#pragma once

#include "gradar/types.hpp"

#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace gradar {

struct Spectrum {
    std::vector<cplx> bins;     // ascending frequency order
    std::vector<double> freqs;  // Hz; negative up to positive, DC included
    std::size_t window_length = 0;
    double sample_rate = 0.0;
};

struct DetectorConfig {
    std::size_t window_length = 128;  // samples per spectral window
    std::size_t hop = 32;             // samples between windows
    double spectral_threshold = 3.0;  // S_th: strong-bin magnitude
    std::size_t min_positive_bins = 3;
    std::size_t min_negative_bins = 3;
    double dc_exclusion_hz = 10.0;  // f_th: bins with |f| <= this are ignored

    // Discard rules for non-gesture motion.
    double discard_phase_threshold = 60.0;  // rad of in-window phase excursion
    double discard_slope_threshold = 1.5;   // rad/sample on filtered slopes
    double discard_freq_hz = 100.0;         // high-frequency band edge
    std::size_t discard_min_positive_bins = 8;
    std::size_t discard_min_negative_bins = 8;
    bool enable_discards = true;

    std::size_t vote_windows = 3;  // consecutive positives required, 3..5

    // Slope extraction inside the window (shared defaults with the
    // slider pipeline).
    std::size_t samples_per_slope = 8;
    std::size_t median_window = 5;
};

// Mean removal, Hann window, DFT, bins reordered to ascending frequency.
// Requires at least 8 samples; throws std::invalid_argument otherwise.
Spectrum spectrum(std::span<const cplx> series, double sample_rate);

// Bin index sets (F+, F-): F+ = { f_th < f < band_limit },
// F- = { -band_limit < f < -f_th }. The default band limit keeps every
// bin; the detector passes the Nyquist frequency so the single ambiguous
// +/-fs/2 bin of an even-length window counts toward neither band.
struct BandSets {
    std::vector<std::size_t> positive;
    std::vector<std::size_t> negative;
};
BandSets band_sets(std::span<const double> freqs, double freq_threshold,
                   double band_limit = std::numeric_limits<double>::infinity());

// AND rule over DC-excluded bands.
bool detect_window(const Spectrum& spec, const DetectorConfig& cfg);

// True if the unwrapped phase wanders more than the threshold away from
// the window's first sample.
bool discard_by_phase(std::span<const cplx> series, double phase_threshold);

// True if any filtered slope magnitude in the window exceeds the threshold.
bool discard_by_slope(std::span<const double> filtered_slopes, double slope_threshold);

// OR rule over the high-frequency bands.
bool discard_by_spectrum(const Spectrum& spec, const DetectorConfig& cfg);

// Consecutive-positive voting; emits at most one event per positive run.
class VoteCounter {
public:
    explicit VoteCounter(std::size_t required);

    // Returns true exactly when the required streak is first reached.
    bool push(bool positive);
    std::size_t streak() const { return streak_; }
    void reset();

private:
    std::size_t required_;
    std::size_t streak_ = 0;
    bool fired_ = false;
};

struct WindowResult {
    double window_start = 0.0;
    int tap = -1;
    int positive_bins = 0;
    int negative_bins = 0;
    bool detected = false;   // AND rule before discards
    bool discarded = false;
    std::size_t vote_streak = 0;
    bool event = false;
};

class TwoFingerDetector {
public:
    TwoFingerDetector(DetectorConfig cfg, double sample_rate, std::size_t taps_of_interest);

    // Feeds one frame; returns a result whenever a spectral window
    // completes (every hop frames once the buffer is full).
    std::optional<WindowResult> push(const TapFrame& frame);

    const DetectorConfig& config() const { return cfg_; }
    void reset();

private:
    WindowResult analyze();

    DetectorConfig cfg_;
    double sample_rate_;
    std::size_t taps_of_interest_;
    std::deque<TapFrame> ring_;
    std::size_t since_last_ = 0;
    VoteCounter vote_;
};

} // namespace gradar
