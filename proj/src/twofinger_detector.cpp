#include "gradar/twofinger_detector.hpp"

#include "gradar/slider_tracker.hpp"
#include "gradar/slope_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gradar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT (decimation in time).
void fft_radix2(std::vector<cplx>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const cplx wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = x[i + k];
                const cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<cplx> dft_any(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            acc += x[m] * std::polar(1.0, -kTwoPi * static_cast<double>(k) *
                                               static_cast<double>(m) / static_cast<double>(n));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace

Spectrum spectrum(std::span<const cplx> series, double sample_rate) {
    const std::size_t n = series.size();
    if (n < 8) throw std::invalid_argument("spectrum: need at least 8 samples");
    if (sample_rate <= 0.0) throw std::invalid_argument("spectrum: sample rate must be > 0");

    cplx mean = 0.0;
    for (const cplx& v : series) mean += v;
    mean /= static_cast<double>(n);

    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
        x[i] = (series[i] - mean) * w;
    }

    std::vector<cplx> bins_natural;
    if (is_power_of_two(n)) {
        fft_radix2(x);
        bins_natural = std::move(x);
    } else {
        bins_natural = dft_any(x);
    }

    // Reorder to ascending frequency: index 0 carries -fs/2 (even n).
    Spectrum spec;
    spec.window_length = n;
    spec.sample_rate = sample_rate;
    spec.bins.resize(n);
    spec.freqs.resize(n);
    const std::size_t half = (n + 1) / 2;  // count of non-negative bins
    const double df = sample_rate / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::ptrdiff_t signed_k =
            (k < half) ? static_cast<std::ptrdiff_t>(k)
                       : static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n);
        const std::size_t out_idx =
            static_cast<std::size_t>(signed_k + static_cast<std::ptrdiff_t>(n - half));
        spec.bins[out_idx] = bins_natural[k];
        spec.freqs[out_idx] = static_cast<double>(signed_k) * df;
    }
    return spec;
}

BandSets band_sets(std::span<const double> freqs, double freq_threshold, double band_limit) {
    BandSets sets;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const double f = freqs[i];
        if (f > freq_threshold && f < band_limit) sets.positive.push_back(i);
        else if (f < -freq_threshold && f > -band_limit) sets.negative.push_back(i);
    }
    return sets;
}

namespace {

std::pair<int, int> strong_bin_counts(const Spectrum& spec, double freq_threshold,
                                      double magnitude_threshold) {
    const double nyquist = spec.sample_rate / 2.0;
    const BandSets sets = band_sets(spec.freqs, freq_threshold, nyquist);
    int pos = 0, neg = 0;
    for (std::size_t i : sets.positive) {
        if (std::abs(spec.bins[i]) >= magnitude_threshold) ++pos;
    }
    for (std::size_t i : sets.negative) {
        if (std::abs(spec.bins[i]) >= magnitude_threshold) ++neg;
    }
    return {pos, neg};
}

} // namespace

bool detect_window(const Spectrum& spec, const DetectorConfig& cfg) {
    const auto [pos, neg] = strong_bin_counts(spec, cfg.dc_exclusion_hz, cfg.spectral_threshold);
    return pos >= static_cast<int>(cfg.min_positive_bins) &&
           neg >= static_cast<int>(cfg.min_negative_bins);
}

bool discard_by_phase(std::span<const cplx> series, double phase_threshold) {
    if (series.empty()) return false;
    std::vector<double> phases;
    phases.reserve(series.size());
    for (const cplx& v : series) phases.push_back(std::arg(v));
    const std::vector<double> unwrapped = unwrap_phases(phases);
    const double anchor = unwrapped.front();
    for (double p : unwrapped) {
        if (std::abs(p - anchor) > phase_threshold) return true;
    }
    return false;
}

bool discard_by_slope(std::span<const double> filtered_slopes, double slope_threshold) {
    for (double s : filtered_slopes) {
        if (std::abs(s) > slope_threshold) return true;
    }
    return false;
}

bool discard_by_spectrum(const Spectrum& spec, const DetectorConfig& cfg) {
    const auto [pos, neg] = strong_bin_counts(spec, cfg.discard_freq_hz, cfg.spectral_threshold);
    return pos >= static_cast<int>(cfg.discard_min_positive_bins) ||
           neg >= static_cast<int>(cfg.discard_min_negative_bins);
}

VoteCounter::VoteCounter(std::size_t required) : required_(required) {
    if (required < 1) throw std::invalid_argument("VoteCounter: required streak must be >= 1");
}

bool VoteCounter::push(bool positive) {
    if (!positive) {
        streak_ = 0;
        fired_ = false;
        return false;
    }
    ++streak_;
    if (streak_ >= required_ && !fired_) {
        fired_ = true;
        return true;
    }
    return false;
}

void VoteCounter::reset() {
    streak_ = 0;
    fired_ = false;
}

TwoFingerDetector::TwoFingerDetector(DetectorConfig cfg, double sample_rate,
                                     std::size_t taps_of_interest)
    : cfg_(cfg), sample_rate_(sample_rate), taps_of_interest_(taps_of_interest),
      vote_(cfg.vote_windows) {
    if (cfg.window_length < 8) {
        throw std::invalid_argument("TwoFingerDetector: window_length must be >= 8");
    }
    if (cfg.hop < 1 || cfg.hop > cfg.window_length) {
        throw std::invalid_argument("TwoFingerDetector: hop must be in [1, window_length]");
    }
    if (taps_of_interest < 1) {
        throw std::invalid_argument("TwoFingerDetector: need at least one tap of interest");
    }
}

std::optional<WindowResult> TwoFingerDetector::push(const TapFrame& frame) {
    ring_.push_back(frame);
    if (ring_.size() > cfg_.window_length) ring_.pop_front();
    ++since_last_;
    if (ring_.size() < cfg_.window_length || since_last_ < cfg_.hop) return std::nullopt;
    since_last_ = 0;
    return analyze();
}

WindowResult TwoFingerDetector::analyze() {
    WindowResult result;
    result.window_start = ring_.front().timestamp;

    const TapFrame& center = ring_[ring_.size() / 2];
    const std::size_t n = std::min(taps_of_interest_, center.tap_count());
    const std::size_t tap = select_tap_max_magnitude(std::span<const cplx>(center.taps.data(), n));
    result.tap = static_cast<int>(tap);

    std::vector<cplx> series;
    series.reserve(ring_.size());
    for (const TapFrame& f : ring_) series.push_back(f.taps[tap]);

    const Spectrum spec = spectrum(series, sample_rate_);
    const auto [pos, neg] =
        strong_bin_counts(spec, cfg_.dc_exclusion_hz, cfg_.spectral_threshold);
    result.positive_bins = pos;
    result.negative_bins = neg;
    result.detected = pos >= static_cast<int>(cfg_.min_positive_bins) &&
                      neg >= static_cast<int>(cfg_.min_negative_bins);

    if (cfg_.enable_discards) {
        bool discard = discard_by_phase(series, cfg_.discard_phase_threshold);
        if (!discard) {
            const SlopeSequence slopes =
                slope_sequence(series, cfg_.samples_per_slope, cfg_.median_window);
            discard = discard_by_slope(slopes.filtered, cfg_.discard_slope_threshold);
        }
        if (!discard) discard = discard_by_spectrum(spec, cfg_);
        result.discarded = discard;
    }

    const bool positive = result.detected && !result.discarded;
    result.event = vote_.push(positive);
    result.vote_streak = vote_.streak();
    return result;
}

void TwoFingerDetector::reset() {
    ring_.clear();
    since_last_ = 0;
    vote_.reset();
}

} // namespace gradar
