#include "gradar/slope_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gradar {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Principal-value difference in (-pi, pi].
double principal(double d) {
    d = std::remainder(d, kTwoPi);
    if (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}
} // namespace

std::vector<double> unwrap_phases(std::span<const double> phases) {
    std::vector<double> out;
    out.reserve(phases.size());
    if (phases.empty()) return out;
    out.push_back(phases[0]);
    for (std::size_t i = 1; i < phases.size(); ++i) {
        out.push_back(out.back() + principal(phases[i] - phases[i - 1]));
    }
    return out;
}

LinearFit linear_fit_slope(std::span<const double> phases, std::span<const double> times) {
    if (phases.size() != times.size()) {
        throw std::invalid_argument("linear_fit_slope: phases/times size mismatch");
    }
    const std::size_t n = phases.size();
    if (n < 2) throw DegenerateFitError("linear_fit_slope: need at least 2 samples");

    double mean_t = 0.0, mean_p = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_t += times[i];
        mean_p += phases[i];
    }
    mean_t /= static_cast<double>(n);
    mean_p /= static_cast<double>(n);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = times[i] - mean_t;
        num += dt * (phases[i] - mean_p);
        den += dt * dt;
    }
    if (den == 0.0) throw DegenerateFitError("linear_fit_slope: all time points identical");

    LinearFit fit;
    fit.slope = num / den;
    fit.intercept = mean_p - fit.slope * mean_t;
    fit.mean_time = mean_t;
    fit.mean_phase = mean_p;
    return fit;
}

LinearFit linear_fit_slope(std::span<const double> phases) {
    std::vector<double> times(phases.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i + 1);
    return linear_fit_slope(phases, times);
}

std::vector<double> piecewise_slopes(const Batch& batch, std::size_t tap, std::size_t group_size) {
    if (group_size < 2) throw std::invalid_argument("piecewise_slopes: group size must be >= 2");
    if (batch.size() % group_size != 0) {
        throw FramingError("piecewise_slopes: batch length " + std::to_string(batch.size()) +
                           " not a multiple of group size " + std::to_string(group_size));
    }
    std::vector<double> phases;
    phases.reserve(batch.size());
    for (const TapFrame& f : batch.frames) {
        if (tap >= f.tap_count()) {
            throw std::invalid_argument("piecewise_slopes: tap " + std::to_string(tap) +
                                        " out of range");
        }
        phases.push_back(std::arg(f.taps[tap]));
    }
    const std::vector<double> unwrapped = unwrap_phases(phases);

    std::vector<double> slopes;
    slopes.reserve(batch.size() / group_size);
    for (std::size_t g = 0; g + group_size <= unwrapped.size(); g += group_size) {
        slopes.push_back(
            linear_fit_slope(std::span<const double>(unwrapped.data() + g, group_size)).slope);
    }
    return slopes;
}

SlopeSequence slope_sequence(std::span<const cplx> series, std::size_t group_size,
                             std::size_t median_window) {
    if (group_size < 2) throw std::invalid_argument("slope_sequence: group size must be >= 2");
    SlopeSequence seq;
    seq.samples_per_fit = group_size;
    seq.median_window = median_window;

    std::vector<double> phases;
    phases.reserve(series.size());
    for (const cplx& v : series) phases.push_back(std::arg(v));
    const std::vector<double> unwrapped = unwrap_phases(phases);

    MedianFilter median(median_window);
    for (std::size_t g = 0; g + group_size <= unwrapped.size(); g += group_size) {
        const double raw =
            linear_fit_slope(std::span<const double>(unwrapped.data() + g, group_size)).slope;
        seq.raw.push_back(raw);
        seq.filtered.push_back(median.push(raw));
    }
    return seq;
}

MedianFilter::MedianFilter(std::size_t window_length) : window_(window_length) {
    if (window_length < 1) throw std::invalid_argument("MedianFilter: window must be >= 1");
}

double MedianFilter::push(double value) {
    ring_.push_back(value);
    if (ring_.size() > window_) ring_.pop_front();
    std::vector<double> scratch(ring_.begin(), ring_.end());
    return median_of(scratch);
}

void MedianFilter::reset() { ring_.clear(); }

double median_of(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("median_of: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

} // namespace gradar
