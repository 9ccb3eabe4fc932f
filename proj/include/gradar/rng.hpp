// Deterministic random number generation for simulation.
//
// Standard-library distributions are not bit-reproducible across
// implementations, so the simulator draws through these fixed transforms
// on top of a splitmix64 core. Identical seeds give identical streams on
// any platform with IEEE-754 doubles.

#pragma once

#include <cmath>
#include <cstdint>

namespace gradar {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Standard normal via Box-Muller; draws in fixed pairs.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        // Guard the log against u1 == 0.
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Exponential inter-arrival time with the given rate (events/second).
    double next_exponential(double rate) {
        double u = next_double();
        if (u <= 0.0) u = 0x1.0p-53;
        return -std::log(u) / rate;
    }

    // Derive an independent stream for a labeled substream.
    Rng fork(std::uint64_t label) {
        Rng mixer(state_ ^ (0xa0761d6478bd642fULL + label));
        return Rng(mixer.next_u64());
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace gradar
