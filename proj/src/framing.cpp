#include "gradar/framing.hpp"

#include <stdexcept>
#include <string>

namespace gradar {

TapFrame coherent_combine(std::span<const TapFrame> pulses) {
    if (pulses.empty()) throw std::invalid_argument("coherent_combine: no pulses");
    const std::size_t n_taps = pulses.front().tap_count();
    TapFrame out;
    out.taps.assign(n_taps, cplx(0.0, 0.0));
    out.timestamp = pulses.front().timestamp;
    out.tap_spacing = pulses.front().tap_spacing;
    for (const TapFrame& p : pulses) {
        if (p.tap_count() != n_taps) {
            throw std::invalid_argument("coherent_combine: tap count mismatch (" +
                                        std::to_string(p.tap_count()) + " vs " +
                                        std::to_string(n_taps) + ")");
        }
        for (std::size_t i = 0; i < n_taps; ++i) out.taps[i] += p.taps[i];
    }
    return out;
}

std::vector<TapFrame> reframe(std::span<const cplx> stream, std::size_t n_taps,
                              double first_time, double packet_interval, double tap_spacing) {
    if (n_taps == 0) throw std::invalid_argument("reframe: n_taps must be >= 1");
    if (stream.size() % n_taps != 0) {
        throw FramingError("reframe: stream length " + std::to_string(stream.size()) +
                           " is not a multiple of n_taps=" + std::to_string(n_taps));
    }
    const std::size_t n_frames = stream.size() / n_taps;
    std::vector<TapFrame> frames(n_frames);
    for (std::size_t k = 0; k < n_frames; ++k) {
        frames[k].taps.assign(stream.begin() + static_cast<std::ptrdiff_t>(k * n_taps),
                              stream.begin() + static_cast<std::ptrdiff_t>((k + 1) * n_taps));
        frames[k].timestamp = first_time + static_cast<double>(k) * packet_interval;
        frames[k].tap_spacing = tap_spacing;
    }
    return frames;
}

std::vector<cplx> tap_series(std::span<const TapFrame> frames, std::size_t tap) {
    std::vector<cplx> series;
    series.reserve(frames.size());
    for (const TapFrame& f : frames) {
        if (tap >= f.tap_count()) {
            throw std::invalid_argument("tap_series: tap " + std::to_string(tap) +
                                        " out of range for frame with " +
                                        std::to_string(f.tap_count()) + " taps");
        }
        series.push_back(f.taps[tap]);
    }
    return series;
}

std::size_t batch_size(std::size_t n_new, std::size_t group_size) {
    if (n_new < 1) throw std::invalid_argument("batch_size: need at least one new sample");
    if (group_size < 2) throw std::invalid_argument("batch_size: group size must be >= 2");
    return group_size * ((n_new + group_size - 1) / group_size);
}

BatchAssembler::BatchAssembler(std::size_t group_size, std::size_t history_depth_groups)
    : group_size_(group_size), max_history_(group_size * history_depth_groups) {
    if (group_size < 2) throw std::invalid_argument("BatchAssembler: group size must be >= 2");
}

Batch BatchAssembler::assemble(std::span<const TapFrame> new_frames) {
    Batch batch;
    if (!new_frames.empty()) {
        const std::size_t want = batch_size(new_frames.size(), group_size_);
        const std::size_t from_history = want - new_frames.size();

        if (from_history <= history_.size()) {
            batch.frames.reserve(want);
            batch.frames.insert(batch.frames.end(), history_.end() - static_cast<std::ptrdiff_t>(from_history),
                                history_.end());
            batch.frames.insert(batch.frames.end(), new_frames.begin(), new_frames.end());
        } else {
            // Warm-up: not enough logged frames. Use the most recent
            // group-aligned run of what is available.
            const std::size_t available = history_.size() + new_frames.size();
            const std::size_t aligned = (available / group_size_) * group_size_;
            if (aligned > 0) {
                batch.frames.reserve(aligned);
                const std::size_t take_new = std::min(aligned, new_frames.size());
                const std::size_t take_old = aligned - take_new;
                batch.frames.insert(batch.frames.end(),
                                    history_.end() - static_cast<std::ptrdiff_t>(take_old),
                                    history_.end());
                batch.frames.insert(batch.frames.end(), new_frames.end() - static_cast<std::ptrdiff_t>(take_new),
                                    new_frames.end());
            }
        }

        history_.insert(history_.end(), new_frames.begin(), new_frames.end());
        while (history_.size() > max_history_) history_.pop_front();
    }
    return batch;
}

} // namespace gradar
