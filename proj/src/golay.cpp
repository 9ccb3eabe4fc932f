#include "gradar/golay.hpp"

#include <stdexcept>
#include <string>

namespace gradar {

GolayPair generate_golay_pair(std::size_t length) {
    if (length < 2 || length > 128 || (length & (length - 1)) != 0) {
        throw std::invalid_argument("golay length must be a power of two in [2, 128], got " +
                                    std::to_string(length));
    }
    GolayPair pair;
    pair.seq_a = {1};
    pair.seq_b = {1};
    while (pair.seq_a.size() < length) {
        std::vector<int> a = pair.seq_a;
        std::vector<int> b = pair.seq_b;
        pair.seq_a.clear();
        pair.seq_b.clear();
        pair.seq_a.insert(pair.seq_a.end(), a.begin(), a.end());
        pair.seq_a.insert(pair.seq_a.end(), b.begin(), b.end());
        pair.seq_b.insert(pair.seq_b.end(), a.begin(), a.end());
        for (int v : b) pair.seq_b.push_back(-v);
    }
    return pair;
}

CorrelationOutput correlate(std::span<const cplx> received, std::span<const int> seq,
                            double sample_period) {
    if (seq.empty()) throw std::invalid_argument("correlate: empty reference sequence");
    if (received.size() < seq.size()) {
        throw std::invalid_argument("correlate: received shorter than reference (" +
                                    std::to_string(received.size()) + " < " +
                                    std::to_string(seq.size()) + ")");
    }
    CorrelationOutput out;
    out.sample_period = sample_period;
    const std::size_t n_lags = received.size() - seq.size() + 1;
    out.lags.resize(n_lags);
    for (std::size_t k = 0; k < n_lags; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < seq.size(); ++m) {
            acc += received[k + m] * static_cast<double>(seq[m]);
        }
        out.lags[k] = acc;
    }
    return out;
}

long long autocorrelation(std::span<const int> seq, std::size_t lag) {
    long long acc = 0;
    for (std::size_t m = 0; m + lag < seq.size(); ++m) {
        acc += static_cast<long long>(seq[m]) * seq[m + lag];
    }
    return acc;
}

std::vector<cplx> make_ce_field(const GolayPair& pair, std::size_t n_taps) {
    const std::size_t n = pair.length();
    std::vector<cplx> field(2 * (n + n_taps), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        field[i] = static_cast<double>(pair.seq_a[i]);
        field[n + n_taps + i] = static_cast<double>(pair.seq_b[i]);
    }
    return field;
}

TapFrame channel_estimate(std::span<const cplx> rx_ce_field, const GolayPair& pair) {
    const std::size_t n = pair.length();
    if (rx_ce_field.size() % 2 != 0 || rx_ce_field.size() / 2 <= n) {
        throw FramingError("channel_estimate: field length " + std::to_string(rx_ce_field.size()) +
                           " does not fit layout 2*(N + N_T) with N=" + std::to_string(n));
    }
    const std::size_t n_taps = rx_ce_field.size() / 2 - n;
    const std::size_t seg = n + n_taps;

    TapFrame frame;
    frame.taps.assign(n_taps, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n_taps; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            acc += rx_ce_field[k + m] * static_cast<double>(pair.seq_a[m]);
            acc += rx_ce_field[seg + k + m] * static_cast<double>(pair.seq_b[m]);
        }
        frame.taps[k] = acc;
    }
    return frame;
}

} // namespace gradar
