#include "gradar/slider_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gradar {

double tracker_update(double prev_level, double slope, const TrackerConfig& cfg) {
    const double next = prev_level + cfg.attenuation * slope;
    return std::clamp(next, -cfg.range, cfg.range);
}

std::size_t select_tap_max_magnitude(std::span<const cplx> taps) {
    if (taps.empty()) throw std::invalid_argument("select_tap_max_magnitude: no taps");
    std::size_t best = 0;
    double best_mag = std::abs(taps[0]);
    for (std::size_t i = 1; i < taps.size(); ++i) {
        const double mag = std::abs(taps[i]);
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    return best;
}

std::size_t select_tap_max_slope(std::span<const double> slopes) {
    if (slopes.empty()) throw std::invalid_argument("select_tap_max_slope: no slopes");
    std::size_t best = 0;
    double best_mag = std::abs(slopes[0]);
    for (std::size_t i = 1; i < slopes.size(); ++i) {
        const double mag = std::abs(slopes[i]);
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    return best;
}

double fuse_average(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("fuse_average: empty input");
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

bool slope_gate(std::span<const double> slopes, double threshold) {
    for (double s : slopes) {
        if (!(std::abs(s) < threshold)) return false;
    }
    return true;
}

bool presence_by_magnitude(std::span<const cplx> taps, double threshold) {
    for (const cplx& x : taps) {
        if (std::abs(x) > threshold) return true;
    }
    return false;
}

double sample_std(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

bool presence_by_std(std::span<const std::vector<double>> per_tap_history, double threshold) {
    for (const auto& history : per_tap_history) {
        if (sample_std(history) > threshold) return true;
    }
    return false;
}

SliderTracker::SliderTracker(TrackerConfig cfg, std::size_t n_taps)
    : cfg_(cfg), n_taps_(n_taps), tap_levels_(n_taps, 0.0), magnitude_history_(n_taps) {
    if (n_taps == 0) throw std::invalid_argument("SliderTracker: need at least one tap");
    if (cfg.range <= 0.0) throw std::invalid_argument("SliderTracker: range must be > 0");
    if (cfg.attenuation <= 0.0) throw std::invalid_argument("SliderTracker: attenuation must be > 0");
}

void SliderTracker::observe_frame(const TapFrame& frame) {
    const std::size_t n = std::min(n_taps_, frame.tap_count());
    for (std::size_t i = 0; i < n; ++i) {
        auto& hist = magnitude_history_[i];
        hist.push_back(std::abs(frame.taps[i]));
        if (hist.size() > cfg_.std_window) hist.pop_front();
    }
}

bool SliderTracker::presence(const TapFrame& frame) const {
    const std::size_t n = std::min(n_taps_, frame.tap_count());
    if (cfg_.presence_rule == PresenceRule::magnitude) {
        return presence_by_magnitude(std::span<const cplx>(frame.taps.data(), n),
                                     cfg_.magnitude_threshold);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> window(magnitude_history_[i].begin(), magnitude_history_[i].end());
        if (sample_std(window) > cfg_.std_threshold) return true;
    }
    return false;
}

SliderSample SliderTracker::step(const TapFrame& frame, std::span<const double> per_tap_slopes) {
    if (per_tap_slopes.size() < n_taps_) {
        throw std::invalid_argument("SliderTracker::step: fewer slopes than tracked taps");
    }
    SliderSample sample;
    sample.time = frame.timestamp;
    sample.present = presence(frame);
    sample.enabled = slope_gate(per_tap_slopes.first(n_taps_), cfg_.slope_gate_threshold);

    const std::size_t frame_taps = std::min(n_taps_, frame.tap_count());
    int tap = -1;
    double drive = 0.0;
    switch (cfg_.tap_strategy) {
    case TapStrategy::max_magnitude:
        tap = static_cast<int>(
            select_tap_max_magnitude(std::span<const cplx>(frame.taps.data(), frame_taps)));
        drive = per_tap_slopes[static_cast<std::size_t>(tap)];
        break;
    case TapStrategy::max_slope:
        tap = static_cast<int>(select_tap_max_slope(per_tap_slopes.first(n_taps_)));
        drive = per_tap_slopes[static_cast<std::size_t>(tap)];
        break;
    case TapStrategy::average:
        drive = fuse_average(per_tap_slopes.first(n_taps_));
        break;
    }
    sample.tap = tap;

    if (sample.present && sample.enabled) {
        const double sign = cfg_.invert_polarity ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n_taps_; ++i) {
            tap_levels_[i] = tracker_update(tap_levels_[i], sign * per_tap_slopes[i], cfg_);
        }
        level_ = tracker_update(level_, sign * drive, cfg_);
    }
    sample.level = level_;
    return sample;
}

void SliderTracker::reset() {
    level_ = 0.0;
    std::fill(tap_levels_.begin(), tap_levels_.end(), 0.0);
    for (auto& h : magnitude_history_) h.clear();
}

} // namespace gradar
