#include "gradar/framing.hpp"

#include "gradar/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

using namespace gradar;

namespace {

TapFrame frame_of(std::vector<cplx> taps, double t = 0.0) {
    TapFrame f;
    f.taps = std::move(taps);
    f.timestamp = t;
    return f;
}

std::vector<TapFrame> numbered_frames(std::size_t count, std::size_t n_taps, double t0 = 0.0) {
    std::vector<TapFrame> frames;
    for (std::size_t k = 0; k < count; ++k) {
        TapFrame f;
        f.timestamp = t0 + 0.002 * static_cast<double>(k);
        for (std::size_t i = 0; i < n_taps; ++i) {
            f.taps.emplace_back(static_cast<double>(k), static_cast<double>(i));
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

} // namespace

TEST_SUITE("framing") {

TEST_CASE("combining 16 identical unit pulses gives magnitude 16 and keeps phase") {
    const cplx v = std::polar(1.0, 0.7);
    std::vector<TapFrame> pulses(16, frame_of({v, v * std::polar(1.0, -1.2)}));
    const TapFrame out = coherent_combine(pulses);
    REQUIRE(out.tap_count() == 2);
    CHECK(std::abs(out.taps[0]) == doctest::Approx(16.0));
    CHECK(std::arg(out.taps[0]) == doctest::Approx(0.7));
    CHECK(std::abs(out.taps[1]) == doctest::Approx(16.0));
}

TEST_CASE("opposite phases cancel") {
    std::vector<TapFrame> pulses = {frame_of({std::polar(1.0, 0.3)}),
                                    frame_of({std::polar(1.0, 0.3 + std::numbers::pi)})};
    const TapFrame out = coherent_combine(pulses);
    CHECK(std::abs(out.taps[0]) < 1e-15);
}

TEST_CASE("combining equals the element-wise complex sum") {
    Rng rng(11);
    std::vector<TapFrame> pulses;
    for (int k = 0; k < 7; ++k) {
        TapFrame f;
        for (int i = 0; i < 4; ++i) f.taps.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
        f.timestamp = 0.1 * k;
        pulses.push_back(std::move(f));
    }
    const TapFrame out = coherent_combine(pulses);
    CHECK(out.timestamp == doctest::Approx(0.0));
    for (int i = 0; i < 4; ++i) {
        cplx expect = 0.0;
        for (const auto& p : pulses) expect += p.taps[i];
        CHECK(std::abs(out.taps[i] - expect) < 1e-12);
    }
}

TEST_CASE("combining rejects mismatched tap counts and empty input") {
    std::vector<TapFrame> pulses = {frame_of({1.0, 2.0}), frame_of({1.0})};
    CHECK_THROWS_AS(coherent_combine(pulses), std::invalid_argument);
    CHECK_THROWS_AS(coherent_combine(std::vector<TapFrame>{}), std::invalid_argument);
}

TEST_CASE("coherent combining of a fixed signal raises SNR by ~10log10(Np)") {
    // Monte-Carlo: unit signal plus complex white noise, 16 pulses.
    Rng rng(123);
    const int trials = 2000;
    const std::size_t n_p = 16;
    const double noise_var = 0.1;
    const double sigma = std::sqrt(noise_var / 2.0);
    const cplx signal(1.0, 0.0);

    double single_noise_power = 0.0;
    double combined_noise_power = 0.0;
    for (int t = 0; t < trials; ++t) {
        cplx sum = 0.0;
        for (std::size_t p = 0; p < n_p; ++p) {
            const cplx noise(sigma * rng.next_normal(), sigma * rng.next_normal());
            if (p == 0) single_noise_power += std::norm(noise);
            sum += signal + noise;
        }
        combined_noise_power += std::norm(sum - 16.0 * signal);
    }
    const double snr_single = std::norm(signal) / (single_noise_power / trials);
    const double snr_combined = std::norm(16.0 * signal) / (combined_noise_power / trials);
    const double gain_db = 10.0 * std::log10(snr_combined / snr_single);
    CHECK(gain_db == doctest::Approx(12.04).epsilon(0.1));
}

TEST_CASE("reframe slices the stream per the tap/time picture") {
    // 15 samples, 5 taps: tap 1 carries samples {1, 6, 11}, tap 4 carries
    // {4, 9, 14} (1-based sample labels).
    std::vector<cplx> stream;
    for (int s = 1; s <= 15; ++s) stream.emplace_back(static_cast<double>(s), 0.0);
    const auto frames = reframe(stream, 5);
    REQUIRE(frames.size() == 3);

    const auto tap1 = tap_series(frames, 0);
    CHECK(tap1[0].real() == 1.0);
    CHECK(tap1[1].real() == 6.0);
    CHECK(tap1[2].real() == 11.0);

    const auto tap4 = tap_series(frames, 3);
    CHECK(tap4[0].real() == 4.0);
    CHECK(tap4[1].real() == 9.0);
    CHECK(tap4[2].real() == 14.0);

    CHECK(frames[0].timestamp == doctest::Approx(0.0));
    CHECK(frames[1].timestamp == doctest::Approx(0.002));
}

TEST_CASE("reframe with one tap is the identity") {
    std::vector<cplx> stream = {{1, 0}, {2, 0}, {3, 0}};
    const auto frames = reframe(stream, 1);
    REQUIRE(frames.size() == 3);
    const auto series = tap_series(frames, 0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(series[i] == stream[i]);
}

TEST_CASE("reframe rejects non-multiple stream lengths") {
    std::vector<cplx> stream(14, cplx(0.0, 0.0));
    CHECK_THROWS_AS(reframe(stream, 5), FramingError);
}

TEST_CASE("reframe then flatten is the identity on random streams") {
    Rng rng(5);
    for (std::size_t n_taps : {1, 3, 5, 8}) {
        std::vector<cplx> stream(n_taps * 12);
        for (auto& v : stream) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const auto frames = reframe(stream, n_taps);
        std::vector<cplx> flat;
        for (const auto& f : frames) flat.insert(flat.end(), f.taps.begin(), f.taps.end());
        REQUIRE(flat.size() == stream.size());
        for (std::size_t i = 0; i < flat.size(); ++i) CHECK(flat[i] == stream[i]);
    }
}

TEST_CASE("batch size rounds up to the next group multiple") {
    CHECK(batch_size(5, 8) == 8);
    CHECK(batch_size(8, 8) == 8);
    CHECK(batch_size(9, 8) == 16);
    CHECK(batch_size(1, 8) == 8);
    CHECK_THROWS_AS(batch_size(0, 8), std::invalid_argument);
    CHECK_THROWS_AS(batch_size(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(batch_size(5, 1), std::invalid_argument);
}

TEST_CASE("batch size never pads by a full group") {
    for (std::size_t n_new = 1; n_new <= 40; ++n_new) {
        for (std::size_t group : {2, 5, 8, 20}) {
            CHECK(batch_size(n_new, group) - n_new < group);
        }
    }
}

TEST_CASE("assembler with empty history returns the aligned new frames") {
    BatchAssembler assembler(8);
    const auto frames = numbered_frames(8, 2);
    const Batch batch = assembler.assemble(frames);
    REQUIRE(batch.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(batch.frames[i].timestamp == frames[i].timestamp);
    }
}

TEST_CASE("assembler pads with logged frames") {
    BatchAssembler assembler(8);
    // First iteration logs 8 frames; second brings 5 new ones.
    const auto first = numbered_frames(8, 2, 0.0);
    assembler.assemble(first);
    const auto second = numbered_frames(5, 2, 8 * 0.002);
    const Batch batch = assembler.assemble(second);
    REQUIRE(batch.size() == 8);
    // Last 3 of the first iteration, then the 5 new ones.
    CHECK(batch.frames[0].timestamp == doctest::Approx(first[5].timestamp));
    CHECK(batch.frames[2].timestamp == doctest::Approx(first[7].timestamp));
    CHECK(batch.frames[3].timestamp == doctest::Approx(second[0].timestamp));
    CHECK(batch.frames[7].timestamp == doctest::Approx(second[4].timestamp));
}

TEST_CASE("warm-up with insufficient frames returns a shorter aligned batch") {
    BatchAssembler assembler(8);
    const auto first = numbered_frames(5, 1, 0.0);
    const Batch b1 = assembler.assemble(first);
    CHECK(b1.empty());  // only 5 frames available, nothing aligned yet

    const auto second = numbered_frames(5, 1, 5 * 0.002);
    const Batch b2 = assembler.assemble(second);
    REQUIRE(b2.size() == 8);  // 10 available -> one aligned group of 8
    CHECK(b2.frames.back().timestamp == doctest::Approx(second.back().timestamp));
}

TEST_CASE("warm-up with many new frames trims to the newest aligned run") {
    BatchAssembler assembler(8);
    const auto frames = numbered_frames(11, 1, 0.0);  // wants 16, has 11
    const Batch batch = assembler.assemble(frames);
    REQUIRE(batch.size() == 8);
    CHECK(batch.frames.front().timestamp == doctest::Approx(frames[3].timestamp));
    CHECK(batch.frames.back().timestamp == doctest::Approx(frames.back().timestamp));
}

TEST_CASE("randomized feeds keep batches time-ordered with the newest frame last") {
    Rng rng(99);
    BatchAssembler assembler(8);
    double t = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t n_new = 1 + static_cast<std::size_t>(rng.next_u64() % 12);
        const auto frames = numbered_frames(n_new, 1, t);
        t += 0.002 * static_cast<double>(n_new);
        const Batch batch = assembler.assemble(frames);
        if (batch.empty()) continue;
        CHECK(batch.size() % 8 == 0);
        for (std::size_t i = 1; i < batch.size(); ++i) {
            CHECK(batch.frames[i].timestamp > batch.frames[i - 1].timestamp);
        }
        CHECK(batch.frames.back().timestamp == doctest::Approx(frames.back().timestamp));
    }
}

} // TEST_SUITE
