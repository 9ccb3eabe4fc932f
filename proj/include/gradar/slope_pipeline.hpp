// Phase-to-slope processing: unwrapping, piecewise least-squares linear
// fits, and moving-median denoising of the fitted slopes.
//
// A 1 mm displacement at 5 mm wavelength already moves the echo phase by
// 144 degrees, so every batch is unwrapped before fitting. Slopes are in
// radians per sample interval; only display code converts to physical
// units. The median filter suppresses the multiplicative-instability
// bursts that corrupt individual fit groups.

#pragma once

#include "gradar/types.hpp"

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace gradar {

struct LinearFit {
    double slope = 0.0;      // radians per sample
    double intercept = 0.0;  // radians
    double mean_time = 0.0;
    double mean_phase = 0.0;
};

struct SlopeSequence {
    std::vector<double> raw;
    std::vector<double> filtered;
    std::size_t samples_per_fit = 0;
    std::size_t median_window = 0;
};

// Removes 2*pi jumps so successive differences lie in (-pi, pi]. The
// output equals the input modulo 2*pi, anchored at the first sample.
std::vector<double> unwrap_phases(std::span<const double> phases);

// Centered least-squares line through (times[i], phases[i]). Requires at
// least two samples and distinct times; throws DegenerateFitError
// otherwise.
LinearFit linear_fit_slope(std::span<const double> phases, std::span<const double> times);

// Convenience form with implicit times 1..N.
LinearFit linear_fit_slope(std::span<const double> phases);

// One slope per group of group_size samples of the unwrapped phase at the
// chosen tap. The batch length must be a multiple of group_size (the
// assembler guarantees this); tap out of range throws.
std::vector<double> piecewise_slopes(const Batch& batch, std::size_t tap, std::size_t group_size);

// Raw and median-filtered slopes of one complex series, with a filter
// that starts empty (warm-up medians over what is available). Trailing
// samples short of a full group are ignored. Used for self-contained
// windows; the streaming pipeline keeps its own MedianFilter state.
SlopeSequence slope_sequence(std::span<const cplx> series, std::size_t group_size,
                             std::size_t median_window);

// Streaming exact moving median over the last window_length pushes.
// Warm-up medians use all samples seen so far.
class MedianFilter {
public:
    explicit MedianFilter(std::size_t window_length);

    double push(double value);
    void reset();

    std::size_t window_length() const { return window_; }

private:
    std::size_t window_;
    std::deque<double> ring_;
};

// Median of a full window, used as the filter's oracle-free core.
double median_of(std::span<const double> values);

} // namespace gradar
