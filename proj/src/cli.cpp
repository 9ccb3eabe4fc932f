#include "gradar/cli.hpp"

#include "gradar/scene_sim.hpp"
#include "gradar/slope_pipeline.hpp"
#include "gradar/twofinger_detector.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <vector>

namespace gradar {

namespace {

class StageClock {
public:
    explicit StageClock(bool quiet) : quiet_(quiet), last_(std::chrono::steady_clock::now()) {}

    void mark(const char* stage) {
        const auto now = std::chrono::steady_clock::now();
        if (!quiet_) {
            const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
            std::fprintf(stderr, "[%s] %.1f ms\n", stage, ms);
        }
        last_ = now;
    }

private:
    bool quiet_;
    std::chrono::steady_clock::time_point last_;
};

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigMismatchError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const FramingError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

void write_csv_double(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

} // namespace

int cmd_simulate(const std::string& scene_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override, bool quiet) {
    return guarded([&] {
        StageClock clock(quiet);
        Scene scene = load_scene(scene_path);
        if (seed_override) scene.seed = *seed_override;
        clock.mark("load-scene");

        const std::vector<TapFrame> frames = simulate_tap_stream(scene);
        clock.mark("simulate");

        const TapRecording rec =
            make_recording(frames, scene.radio.tap_spacing, scene.radio.packet_rate,
                           static_cast<std::uint32_t>(scene.radio.pulses_per_reading));
        write_recording(rec, out_path);
        clock.mark("write");

        if (!quiet) {
            std::printf("wrote %s: %u frames x %u taps at %u Hz (seed %llu)\n", out_path.c_str(),
                        rec.header.frame_count, rec.header.n_taps, rec.header.sample_rate_hz,
                        static_cast<unsigned long long>(scene.seed));
        }
        return 0;
    });
}

namespace {

void check_header_against_config(const RecordingHeader& header, const PipelineConfig& cfg) {
    if (header.n_taps != cfg.n_taps) {
        throw ConfigMismatchError("recording has " + std::to_string(header.n_taps) +
                                  " taps but config expects " + std::to_string(cfg.n_taps));
    }
    if (std::llround(cfg.sample_rate) != static_cast<long long>(header.sample_rate_hz)) {
        throw ConfigMismatchError("recording sample rate " +
                                  std::to_string(header.sample_rate_hz) +
                                  " Hz does not match config " + std::to_string(cfg.sample_rate));
    }
    if (std::llround(cfg.tap_spacing * 1e6) != static_cast<long long>(header.tap_spacing_um)) {
        throw ConfigMismatchError("recording tap spacing " +
                                  std::to_string(header.tap_spacing_um) +
                                  " um does not match config");
    }
}

} // namespace

int cmd_run(const std::string& recording_path, const std::optional<std::string>& config_path,
            const std::string& report_path, std::uint64_t seed, bool quiet) {
    return guarded([&] {
        StageClock clock(quiet);
        const TapRecording rec = read_recording(recording_path);
        clock.mark("read");

        PipelineConfig cfg;
        if (config_path) {
            cfg = load_config(*config_path);
            check_header_against_config(rec.header, cfg);
        } else {
            // No config given: adopt the recording geometry and defaults.
            cfg.n_taps = rec.header.n_taps;
            cfg.tap_spacing = rec.header.tap_spacing_m();
            cfg.sample_rate = static_cast<double>(rec.header.sample_rate_hz);
            cfg.taps_of_interest = std::min<std::size_t>(cfg.n_taps, 5);
            cfg.detector.samples_per_slope = cfg.samples_per_slope;
            cfg.detector.median_window = cfg.median_window;
        }

        const RunReport report = run_pipeline(rec.frames, cfg, seed);
        clock.mark("process");

        save_report(report, report_path);
        clock.mark("write");

        if (!quiet) {
            std::printf("report %s: %zu trace rows, %zu events\n", report_path.c_str(),
                        report.slider_trace.size(), report.events.size());
        }
        return 0;
    });
}

PipelineConfig calibrate_config(const TapRecording& recording, const CalibrateOptions& options) {
    if (recording.frames.empty()) {
        throw std::invalid_argument("calibrate: recording is empty");
    }
    PipelineConfig cfg;
    cfg.n_taps = recording.header.n_taps;
    cfg.tap_spacing = recording.header.tap_spacing_m();
    cfg.sample_rate = static_cast<double>(recording.header.sample_rate_hz);
    cfg.taps_of_interest = std::min<std::size_t>(cfg.n_taps, 5);
    cfg.detector.samples_per_slope = cfg.samples_per_slope;
    cfg.detector.median_window = cfg.median_window;

    const std::size_t n_taps = cfg.taps_of_interest;
    constexpr double kFloor = 1e-6;

    // Magnitude floor: per-frame max over taps.
    std::vector<double> frame_max;
    frame_max.reserve(recording.frames.size());
    for (const TapFrame& f : recording.frames) {
        double m = 0.0;
        for (std::size_t i = 0; i < std::min(n_taps, f.tap_count()); ++i) {
            m = std::max(m, std::abs(f.taps[i]));
        }
        frame_max.push_back(m);
    }
    cfg.tracker.magnitude_threshold =
        std::max(percentile(frame_max, 0.99) * options.margin, kFloor);

    // Magnitude-variation floor: rolling std per tap.
    std::vector<double> stds;
    for (std::size_t tap = 0; tap < n_taps; ++tap) {
        std::vector<double> window;
        for (const TapFrame& f : recording.frames) {
            window.push_back(std::abs(f.taps[tap]));
            if (window.size() > cfg.tracker.std_window) window.erase(window.begin());
            if (window.size() == cfg.tracker.std_window) stds.push_back(sample_std(window));
        }
    }
    cfg.tracker.std_threshold = std::max(percentile(stds, 0.99) * options.margin, kFloor);

    // Spectral floor: strong-bin threshold from all off-DC bin magnitudes
    // of detector-sized windows across the taps of interest.
    std::vector<double> bin_mags;
    const std::size_t win = cfg.detector.window_length;
    if (recording.frames.size() >= win) {
        for (std::size_t tap = 0; tap < n_taps; ++tap) {
            for (std::size_t start = 0; start + win <= recording.frames.size();
                 start += cfg.detector.hop) {
                std::vector<cplx> series;
                series.reserve(win);
                for (std::size_t k = 0; k < win; ++k) {
                    series.push_back(recording.frames[start + k].taps[tap]);
                }
                const Spectrum spec = spectrum(series, cfg.sample_rate);
                for (std::size_t i = 0; i < spec.bins.size(); ++i) {
                    if (std::abs(spec.freqs[i]) > cfg.detector.dc_exclusion_hz) {
                        bin_mags.push_back(std::abs(spec.bins[i]));
                    }
                }
            }
        }
    }
    cfg.detector.spectral_threshold =
        std::max(percentile(bin_mags, 0.99) * options.margin, kFloor);

    // Slope gate: keep the fastest expected gesture enabled with margin.
    cfg.tracker.slope_gate_threshold = 1.25 * 4.0 * std::numbers::pi *
                                       options.max_gesture_speed /
                                       (options.wavelength * cfg.sample_rate);
    cfg.detector.discard_slope_threshold = cfg.tracker.slope_gate_threshold;

    // Attenuation: a full_range_travel hand movement sweeps level across
    // [-L, L]. Total unwrapped phase for that travel is 4*pi*travel /
    // wavelength; each slope covers samples_per_slope samples of it.
    const double total_phase =
        4.0 * std::numbers::pi * options.full_range_travel / options.wavelength;
    cfg.tracker.attenuation =
        2.0 * cfg.tracker.range * static_cast<double>(cfg.samples_per_slope) / total_phase;

    cfg.validate();
    return cfg;
}

int cmd_calibrate(const std::string& recording_path, const std::string& config_out_path,
                  const CalibrateOptions& options, bool quiet) {
    return guarded([&] {
        StageClock clock(quiet);
        const TapRecording rec = read_recording(recording_path);
        clock.mark("read");
        const PipelineConfig cfg = calibrate_config(rec, options);
        clock.mark("calibrate");
        save_config(cfg, config_out_path);
        clock.mark("write");
        if (!quiet) {
            std::printf("calibrated %s: S_th=%.6g M_th=%.6g M_th_std=%.6g slope_gate=%.6g "
                        "attenuation=%.6g\n",
                        config_out_path.c_str(), cfg.detector.spectral_threshold,
                        cfg.tracker.magnitude_threshold, cfg.tracker.std_threshold,
                        cfg.tracker.slope_gate_threshold, cfg.tracker.attenuation);
        }
        return 0;
    });
}

void export_report_csv(const RunReport& report, const std::string& trace_path,
                       const std::string& events_path) {
    std::ofstream trace(trace_path, std::ios::trunc);
    if (!trace) throw std::runtime_error("export: cannot write " + trace_path);
    trace << "time,level,enabled,present,tap\n";
    for (const SliderSample& s : report.slider_trace) {
        write_csv_double(trace, s.time);
        trace << ',';
        write_csv_double(trace, s.level);
        trace << ',' << (s.enabled ? 1 : 0) << ',' << (s.present ? 1 : 0) << ',' << s.tap << '\n';
    }

    std::ofstream events(events_path, std::ios::trunc);
    if (!events) throw std::runtime_error("export: cannot write " + events_path);
    events << "time,tap,positive_bins,negative_bins,vote\n";
    for (const DetectionEvent& e : report.events) {
        write_csv_double(events, e.time);
        events << ',' << e.tap << ',' << e.positive_bins << ',' << e.negative_bins << ','
               << e.vote_streak << '\n';
    }
}

int cmd_export(const std::string& report_path, const std::string& out_prefix, bool quiet) {
    return guarded([&] {
        const RunReport report = load_report(report_path);
        const std::string trace_path = out_prefix + "_trace.csv";
        const std::string events_path = out_prefix + "_events.csv";
        export_report_csv(report, trace_path, events_path);
        if (!quiet) {
            std::printf("exported %s (%zu rows) and %s (%zu rows)\n", trace_path.c_str(),
                        report.slider_trace.size(), events_path.c_str(), report.events.size());
        }
        return 0;
    });
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"60 GHz WLAN-waveform gesture radar: simulate scenes, run the "
                 "slider/two-finger pipeline, calibrate thresholds, export traces"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags after the subcommand

    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string config_path;
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress progress output");
    app.add_option("--seed", seed, "override the scene seed / tag the report")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--config", config_path, "pipeline config JSON (run)");

    auto* sim = app.add_subcommand("simulate", "render a scene file to a tap recording");
    std::string scene_path, sim_out;
    sim->add_option("scene", scene_path, "scene JSON file")->required();
    sim->add_option("-o,--output", sim_out, "output recording path")->required();

    auto* run = app.add_subcommand("run", "run the gesture pipeline on a recording");
    std::string rec_path, report_path;
    run->add_option("recording", rec_path, "input recording (GTAP)")->required();
    run->add_option("-o,--output", report_path, "output report JSON")->required();

    auto* cal = app.add_subcommand("calibrate", "derive thresholds from a noise/idle recording");
    std::string cal_rec, cal_out;
    CalibrateOptions cal_opts;
    cal->add_option("recording", cal_rec, "idle or noise-only recording")->required();
    cal->add_option("-o,--output", cal_out, "output config JSON")->required();
    cal->add_option("--margin", cal_opts.margin, "multiplier on measured floors");
    cal->add_option("--max-speed", cal_opts.max_gesture_speed,
                    "fastest gesture the slope gate must pass, m/s");
    cal->add_option("--travel", cal_opts.full_range_travel,
                    "hand travel mapped to the full slider range, m");
    cal->add_option("--wavelength", cal_opts.wavelength, "carrier wavelength, m");

    auto* exp = app.add_subcommand("export", "write report trace/event CSV files");
    std::string exp_report, exp_prefix;
    exp->add_option("report", exp_report, "report JSON from 'run'")->required();
    exp->add_option("-o,--output-prefix", exp_prefix, "output path prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (sim->parsed()) {
        return cmd_simulate(scene_path, sim_out,
                            seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt, quiet);
    }
    if (run->parsed()) {
        return cmd_run(rec_path,
                       config_path.empty() ? std::nullopt
                                           : std::optional<std::string>(config_path),
                       report_path, seed, quiet);
    }
    if (cal->parsed()) return cmd_calibrate(cal_rec, cal_out, cal_opts, quiet);
    if (exp->parsed()) return cmd_export(exp_report, exp_prefix, quiet);
    return 2;
}

} // namespace gradar
