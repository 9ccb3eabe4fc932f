#include "gradar/twofinger_detector.hpp"

#include "gradar/pipeline.hpp"
#include "gradar/rng.hpp"
#include "gradar/scene_sim.hpp"
#include "gradar/slider_tracker.hpp"
#include "gradar/slope_pipeline.hpp"

#include "doctest.h"

#include <cmath>
#include <span>
#include <string>
#include <complex>
#include <numbers>
#include <vector>

using namespace gradar;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct DFT-sum oracle with the same pre-processing contract (mean
// removal + Hann), evaluated bin by bin. Independent of the FFT path.
std::vector<cplx> oracle_spectrum(const std::vector<cplx>& series) {
    const std::size_t n = series.size();
    cplx mean = 0.0;
    for (const cplx& v : series) mean += v;
    mean /= static_cast<double>(n);
    std::vector<cplx> windowed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * i / static_cast<double>(n));
        windowed[i] = (series[i] - mean) * w;
    }
    std::vector<cplx> bins(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            acc += windowed[m] *
                   std::polar(1.0, -2.0 * kPi * static_cast<double>(k * m) / static_cast<double>(n));
        }
        bins[k] = acc;
    }
    return bins;
}

std::vector<cplx> tone(std::size_t n, double freq_hz, double sample_rate, double amp = 1.0,
                       double phase0 = 0.0) {
    std::vector<cplx> series(n);
    for (std::size_t i = 0; i < n; ++i) {
        series[i] = std::polar(amp, phase0 + 2.0 * kPi * freq_hz * i / sample_rate);
    }
    return series;
}

std::size_t bin_index(const Spectrum& spec, double freq_hz) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < spec.freqs.size(); ++i) {
        if (std::abs(spec.freqs[i] - freq_hz) < std::abs(spec.freqs[best] - freq_hz)) best = i;
    }
    return best;
}

} // namespace

TEST_SUITE("twofinger") {

TEST_CASE("constant series has no off-DC energy") {
    const std::vector<cplx> series(64, cplx(2.0, -1.0));
    const Spectrum spec = spectrum(series, 500.0);
    for (std::size_t i = 0; i < spec.bins.size(); ++i) {
        CHECK(std::abs(spec.bins[i]) < 1e-9);
    }
}

TEST_CASE("an on-bin exponential peaks at its frequency only") {
    const double fs = 500.0;
    const std::size_t n = 128;
    const double f0 = 8.0 * fs / n;  // exactly bin 8
    const Spectrum spec = spectrum(tone(n, f0, fs), fs);

    const std::size_t pos = bin_index(spec, f0);
    const std::size_t neg = bin_index(spec, -f0);
    CHECK(std::abs(spec.bins[pos]) > 30.0);
    CHECK(std::abs(spec.bins[neg]) < 1e-9);

    // >= 90% of total energy within the peak bin and its two neighbors.
    double total = 0.0;
    for (const auto& b : spec.bins) total += std::norm(b);
    double local = 0.0;
    for (std::size_t i = pos - 1; i <= pos + 1; ++i) local += std::norm(spec.bins[i]);
    CHECK(local >= 0.9 * total);
}

TEST_CASE("two opposite tones give symmetric peaks matching the DFT oracle") {
    const double fs = 500.0;
    const std::size_t n = 128;
    const double f0 = 24.0 * fs / n / 2.0;  // not necessarily on-bin
    std::vector<cplx> series(n);
    const auto up = tone(n, f0, fs, 1.0, 0.3);
    const auto down = tone(n, -f0, fs, 1.0, -1.1);
    for (std::size_t i = 0; i < n; ++i) series[i] = up[i] + down[i];

    const Spectrum spec = spectrum(series, fs);
    const auto oracle = oracle_spectrum(series);

    // Library bins equal the oracle bins (after the fftshift reorder).
    for (std::size_t k = 0; k < n; ++k) {
        const double f = (k < n / 2) ? static_cast<double>(k) * fs / n
                                     : (static_cast<double>(k) - static_cast<double>(n)) * fs / n;
        const std::size_t shifted = bin_index(spec, f);
        CHECK(std::abs(spec.bins[shifted] - oracle[k]) < 1e-6);
    }

    const double peak_pos = std::abs(spec.bins[bin_index(spec, f0)]);
    const double peak_neg = std::abs(spec.bins[bin_index(spec, -f0)]);
    CHECK(peak_pos == doctest::Approx(peak_neg).epsilon(1e-6));
    CHECK(peak_pos > 20.0);
}

TEST_CASE("spectrum rejects too-short series") {
    const std::vector<cplx> series(7, cplx(1.0, 0.0));
    CHECK_THROWS_AS(spectrum(series, 500.0), std::invalid_argument);
}

TEST_CASE("band sets split positive and negative frequencies") {
    const Spectrum spec = spectrum(std::vector<cplx>(256, cplx(1.0, 0.0)), 500.0);

    SUBCASE("tiny threshold takes every strictly-signed bin") {
        const BandSets sets = band_sets(spec.freqs, 1e-9);
        CHECK(sets.positive.size() == 127);  // 128 non-negative bins minus DC
        CHECK(sets.negative.size() == 128);  // includes the -fs/2 bin
    }
    SUBCASE("threshold above Nyquist empties both") {
        const BandSets sets = band_sets(spec.freqs, 251.0);
        CHECK(sets.positive.empty());
        CHECK(sets.negative.empty());
    }
    SUBCASE("20 Hz threshold at 500 Hz matches direct enumeration") {
        const BandSets sets = band_sets(spec.freqs, 20.0);
        std::size_t pos = 0, neg = 0;
        for (double f : spec.freqs) {
            if (f > 20.0) ++pos;
            if (f < -20.0) ++neg;
        }
        CHECK(sets.positive.size() == pos);
        CHECK(sets.negative.size() == neg);
        for (std::size_t i : sets.positive) CHECK(spec.freqs[i] > 20.0);
        for (std::size_t i : sets.negative) CHECK(spec.freqs[i] < -20.0);
    }
    SUBCASE("band limit drops the ambiguous Nyquist bin") {
        const BandSets sets = band_sets(spec.freqs, 1e-9, 250.0);
        CHECK(sets.positive.size() == 127);
        CHECK(sets.negative.size() == 127);
    }
}

TEST_CASE("detection needs strong bins on both sides") {
    const double fs = 500.0;
    DetectorConfig cfg;
    cfg.spectral_threshold = 3.0;

    std::vector<cplx> both(128);
    const auto up = tone(128, 40.0, fs);
    const auto down = tone(128, -40.0, fs);
    for (std::size_t i = 0; i < 128; ++i) both[i] = up[i] + down[i];
    CHECK(detect_window(spectrum(both, fs), cfg));

    CHECK_FALSE(detect_window(spectrum(up, fs), cfg));    // only positive side
    CHECK_FALSE(detect_window(spectrum(down, fs), cfg));  // only negative side
}

TEST_CASE("detection is invariant to common scaling of series and threshold") {
    Rng rng(61);
    const double fs = 500.0;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<cplx> series(128);
        for (auto& v : series) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        // Sprinkle a tone pair at random amplitude.
        const auto up = tone(128, 35.0, fs, rng.uniform(0.0, 3.0));
        const auto down = tone(128, -62.0, fs, rng.uniform(0.0, 3.0));
        for (std::size_t i = 0; i < 128; ++i) series[i] += up[i] + down[i];

        DetectorConfig cfg;
        cfg.spectral_threshold = rng.uniform(0.5, 30.0);
        const bool base = detect_window(spectrum(series, fs), cfg);

        const double c = rng.uniform(0.05, 20.0);
        std::vector<cplx> scaled = series;
        for (auto& v : scaled) v *= c;
        DetectorConfig cfg_scaled = cfg;
        cfg_scaled.spectral_threshold = cfg.spectral_threshold * c;
        CHECK(detect_window(spectrum(scaled, fs), cfg_scaled) == base);
    }
}

TEST_CASE("conjugating the series mirrors the bands") {
    Rng rng(62);
    const double fs = 500.0;
    DetectorConfig cfg;
    cfg.spectral_threshold = 2.0;
    cfg.min_positive_bins = 3;
    cfg.min_negative_bins = 3;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<cplx> series(128);
        for (auto& v : series) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const auto extra = tone(128, rng.uniform(-220.0, 220.0), fs, rng.uniform(0.0, 4.0));
        for (std::size_t i = 0; i < 128; ++i) series[i] += extra[i];

        std::vector<cplx> conj(series.size());
        for (std::size_t i = 0; i < series.size(); ++i) conj[i] = std::conj(series[i]);

        const Spectrum a = spectrum(series, fs);
        const Spectrum b = spectrum(conj, fs);
        const double nyq = fs / 2.0;
        const BandSets sa = band_sets(a.freqs, cfg.dc_exclusion_hz, nyq);
        auto count = [&](const Spectrum& s, const std::vector<std::size_t>& set) {
            int c = 0;
            for (std::size_t i : set) {
                if (std::abs(s.bins[i]) >= cfg.spectral_threshold) ++c;
            }
            return c;
        };
        // Positive count of the conjugate equals negative count of the
        // original and vice versa.
        CHECK(count(a, sa.positive) == count(b, sa.negative));
        CHECK(count(a, sa.negative) == count(b, sa.positive));
        CHECK(detect_window(a, cfg) == detect_window(b, cfg));
    }
}

TEST_CASE("phase discard trips on large excursions only") {
    CHECK_FALSE(discard_by_phase(std::vector<cplx>(32, std::polar(1.0, 0.4)), 10.0));

    // Monotone ramp: 0.5 rad/sample for 64 samples = 32 rad total.
    std::vector<cplx> ramp;
    for (int i = 0; i < 64; ++i) ramp.push_back(std::polar(1.0, 0.5 * i));
    CHECK(discard_by_phase(ramp, 30.0));
    CHECK_FALSE(discard_by_phase(ramp, 35.0));
}

TEST_CASE("slope discard uses absolute filtered slopes") {
    CHECK_FALSE(discard_by_slope(std::vector<double>{0.0, 0.0}, 1.0));
    CHECK(discard_by_slope(std::vector<double>{0.0, 1.4}, 1.0));
    CHECK(discard_by_slope(std::vector<double>{-1.4, 0.0}, 1.0));
}

TEST_CASE("spectrum discard is an OR over the high-frequency bands") {
    const double fs = 500.0;
    DetectorConfig cfg;
    cfg.spectral_threshold = 3.0;
    cfg.discard_freq_hz = 100.0;
    cfg.discard_min_positive_bins = 8;
    cfg.discard_min_negative_bins = 8;

    CHECK_FALSE(discard_by_spectrum(spectrum(std::vector<cplx>(128, cplx(0.1, 0.0)), fs), cfg));

    // One-sided broadband burst above 100 Hz: a comb of strong tones.
    std::vector<cplx> burst(128, cplx(0.0, 0.0));
    for (int line = 0; line < 10; ++line) {
        const auto t = tone(128, 120.0 + 12.0 * line, fs, 2.0);
        for (std::size_t i = 0; i < 128; ++i) burst[i] += t[i];
    }
    CHECK(discard_by_spectrum(spectrum(burst, fs), cfg));

    // A gentle two-finger-like pair stays clear of the rule.
    std::vector<cplx> gentle(128);
    const auto up = tone(128, 24.0, fs);
    const auto down = tone(128, -24.0, fs);
    for (std::size_t i = 0; i < 128; ++i) gentle[i] = up[i] + down[i];
    CHECK_FALSE(discard_by_spectrum(spectrum(gentle, fs), cfg));
}

TEST_CASE("discard rules separate a fast swipe from a gentle two-finger gesture") {
    const double fs = 500.0;
    DetectorConfig cfg;

    // 128-sample window centered on the swipe's inbound leg, taken at the
    // tap the hand currently occupies.
    const Scene swipe = load_scene(std::string(GRADAR_SCENES_DIR) + "/swipe.json");
    const auto swipe_frames = simulate_tap_stream(swipe);
    const std::size_t start = 140;
    const auto center_tap = select_tap_max_magnitude(swipe_frames[start + 64].taps);
    std::vector<cplx> swipe_series;
    for (std::size_t k = start; k < start + 128; ++k) {
        swipe_series.push_back(swipe_frames[k].taps[center_tap]);
    }
    CHECK(discard_by_phase(swipe_series, cfg.discard_phase_threshold));

    // Two-finger window during the gesture: no discard fires.
    const Scene gentle = load_scene(std::string(GRADAR_SCENES_DIR) + "/two_finger.json");
    const auto gentle_frames = simulate_tap_stream(gentle);
    std::vector<cplx> gentle_series;
    for (std::size_t k = 200; k < 328; ++k) gentle_series.push_back(gentle_frames[k].taps[1]);
    CHECK_FALSE(discard_by_phase(gentle_series, cfg.discard_phase_threshold));
    CHECK_FALSE(discard_by_spectrum(spectrum(gentle_series, fs), cfg));

    // Filtered slopes through the same path the detector uses.
    auto filtered_slopes = [&](const std::vector<cplx>& series) {
        std::vector<double> phases;
        for (const cplx& v : series) phases.push_back(std::arg(v));
        const auto unwrapped = unwrap_phases(phases);
        MedianFilter median(cfg.median_window);
        std::vector<double> out;
        for (std::size_t g = 0; g + 8 <= unwrapped.size(); g += 8) {
            out.push_back(
                median.push(linear_fit_slope(std::span<const double>(unwrapped.data() + g, 8))
                                .slope));
        }
        return out;
    };
    CHECK(discard_by_slope(filtered_slopes(swipe_series), cfg.discard_slope_threshold));
    CHECK_FALSE(discard_by_slope(filtered_slopes(gentle_series), cfg.discard_slope_threshold));
}

TEST_CASE("vote counter needs K consecutive positives and fires once per run") {
    VoteCounter vote(3);
    CHECK_FALSE(vote.push(true));
    CHECK_FALSE(vote.push(true));
    CHECK(vote.push(true));        // third consecutive -> event
    CHECK_FALSE(vote.push(true));  // still the same run
    CHECK_FALSE(vote.push(false));
    CHECK_FALSE(vote.push(true));
    CHECK_FALSE(vote.push(true));
    CHECK(vote.push(true));  // new run of three
}

TEST_CASE("interrupted runs never fire") {
    VoteCounter vote(3);
    CHECK_FALSE(vote.push(true));
    CHECK_FALSE(vote.push(true));
    CHECK_FALSE(vote.push(false));
    CHECK_FALSE(vote.push(true));
    CHECK_FALSE(vote.push(true));
}

TEST_CASE("a two-finger scene yields exactly one event end to end") {
    GestureParams params;
    params.speed = 0.06;
    params.duration = 1.0;
    params.lead_in = 0.1;
    params.start_range = 0.0852;
    params.noise_variance = 0.01;
    params.seed = 21;
    const Scene scene = make_gesture_scene(GestureKind::two_finger, params);
    const auto frames = simulate_tap_stream(scene);

    DetectorConfig cfg;
    TwoFingerDetector detector(cfg, 500.0, 5);
    int events = 0;
    int windows = 0;
    for (const auto& f : frames) {
        if (auto res = detector.push(f)) {
            ++windows;
            if (res->event) ++events;
        }
    }
    CHECK(windows == (500 - 128) / 32 + 1);
    CHECK(events == 1);
}

TEST_CASE("single static targets never trigger detection") {
    for (double amp : {0.2, 1.0, 10.0}) {
        GestureParams params;
        params.amplitude = amp;
        params.noise_variance = 0.01;
        params.duration = 1.0;
        params.seed = 31;
        const Scene scene = make_gesture_scene(GestureKind::idle, params);
        const auto frames = simulate_tap_stream(scene);
        TwoFingerDetector detector(DetectorConfig{}, 500.0, 5);
        for (const auto& f : frames) {
            if (auto res = detector.push(f)) CHECK_FALSE(res->event);
        }
    }
}

TEST_CASE("permanently-true discards suppress every event") {
    GestureParams params;
    params.speed = 0.06;
    params.duration = 1.0;
    params.start_range = 0.0852;
    params.seed = 21;
    const Scene scene = make_gesture_scene(GestureKind::two_finger, params);
    const auto frames = simulate_tap_stream(scene);

    DetectorConfig cfg;
    cfg.discard_phase_threshold = -1.0;  // any excursion trips it
    TwoFingerDetector detector(cfg, 500.0, 5);
    for (const auto& f : frames) {
        if (auto res = detector.push(f)) {
            CHECK(res->discarded);
            CHECK_FALSE(res->event);
        }
    }
}

} // TEST_SUITE
