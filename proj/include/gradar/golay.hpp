// Complementary Golay sequences and correlation-based channel estimation.
//
// A Golay pair (Ga, Gb) of length N has aperiodic autocorrelations that
// sum to 2N at lag zero and cancel exactly at every other lag, so the
// combined correlation of both segments of a channel-estimation field
// recovers the channel taps with no sidelobes.

#pragma once

#include "gradar/types.hpp"

#include <span>
#include <vector>

namespace gradar {

struct GolayPair {
    std::vector<int> seq_a;
    std::vector<int> seq_b;

    std::size_t length() const { return seq_a.size(); }
};

struct CorrelationOutput {
    std::vector<cplx> lags;
    double sample_period = 0.0;  // seconds per lag, metadata only
};

// Recursive append/negate construction. Valid lengths: powers of two in
// [2, 128]. Throws std::invalid_argument otherwise.
GolayPair generate_golay_pair(std::size_t length);

// Full-overlap cross-correlation: lag k = sum_m received[k+m] * seq[m].
// Output has received.size() - seq.size() + 1 lags. No normalization.
// sample_period tags the lag axis (seconds per lag) and is metadata only.
CorrelationOutput correlate(std::span<const cplx> received, std::span<const int> seq,
                            double sample_period = 0.0);

// Integer aperiodic autocorrelation of a +/-1 sequence at lag k >= 0.
long long autocorrelation(std::span<const int> seq, std::size_t lag);

// Channel-estimation field layout used throughout the project:
//   [ seq_a | N_T zeros | seq_b | N_T zeros ]
// so the field length is 2 * (N + N_T). The zero pads keep each segment's
// correlation window free of the other segment.
std::vector<cplx> make_ce_field(const GolayPair& pair, std::size_t n_taps);

// Correlates both segments of a received CE field against the pair and
// sums them, yielding one complex value per tap. A noise-free single path
// with delay d and gain g produces 2N*g at tap d and zero elsewhere.
// Throws FramingError if the field length does not match the pair layout.
TapFrame channel_estimate(std::span<const cplx> rx_ce_field, const GolayPair& pair);

} // namespace gradar
