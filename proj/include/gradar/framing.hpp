// Frame assembly: pulse combining, tap/time reframing, and batching.
//
// Raw correlation samples arrive as a flat stream (one value per tap per
// packet). reframe() turns that into TapFrames; coherent_combine() sums
// consecutive pulses for SNR; BatchAssembler builds the per-iteration
// batches that the slope pipeline consumes, padding new samples with
// logged history up to the next multiple of the fit group size.

#pragma once

#include "gradar/types.hpp"

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace gradar {

// Element-wise complex sum over pulses. Output timestamp and tap spacing
// come from the first frame. Throws std::invalid_argument on an empty
// span or mismatched tap counts.
TapFrame coherent_combine(std::span<const TapFrame> pulses);

// Chops a flat correlation stream into frames of n_taps samples.
// Frame k gets timestamp first_time + k * packet_interval.
// Throws FramingError if the stream length is not a multiple of n_taps.
std::vector<TapFrame> reframe(std::span<const cplx> stream, std::size_t n_taps,
                              double first_time = 0.0, double packet_interval = 0.002,
                              double tap_spacing = cb1_tap_spacing());

// Time series of one tap across frames.
std::vector<cplx> tap_series(std::span<const TapFrame> frames, std::size_t tap);

// Smallest multiple of group_size >= n_new. Throws std::invalid_argument
// if n_new < 1 or group_size < 2.
std::size_t batch_size(std::size_t n_new, std::size_t group_size);

// Holds recent frames and forms batches aligned to the fit group size.
// Single writer; produced batches are independent copies.
class BatchAssembler {
public:
    // history_depth_groups: how many multiples of group_size of history to
    // retain (4 covers any new-count up to 3 * group_size).
    explicit BatchAssembler(std::size_t group_size, std::size_t history_depth_groups = 4);

    // Appends the new frames to the log and returns the batch for this
    // iteration: the last (N_B - N_n) logged frames followed by the new
    // ones. During warm-up, when the log is too short, returns a shorter
    // group-aligned batch of the most recent frames (possibly empty).
    Batch assemble(std::span<const TapFrame> new_frames);

    std::size_t group_size() const { return group_size_; }
    std::size_t history_size() const { return history_.size(); }

private:
    std::size_t group_size_;
    std::size_t max_history_;
    std::deque<TapFrame> history_;
};

} // namespace gradar
