#include "gradar/pipeline.hpp"

#include "gradar/framing.hpp"
#include "gradar/slope_pipeline.hpp"

#include "json.hpp"


#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gradar {

RunReport run_pipeline(const std::vector<TapFrame>& frames, const PipelineConfig& config,
                       std::uint64_t seed) {
    PipelineConfig cfg = config;
    // The detector computes its in-window slopes with the pipeline's fit
    // and median settings.
    cfg.detector.samples_per_slope = cfg.samples_per_slope;
    cfg.detector.median_window = cfg.median_window;
    cfg.validate();

    RunReport report;
    report.config = cfg;
    report.seed = seed;
    if (frames.empty()) return report;

    const std::size_t n_taps = std::min<std::size_t>(cfg.taps_of_interest, frames[0].tap_count());

    BatchAssembler assembler(cfg.samples_per_slope);
    SliderTracker tracker(cfg.tracker, n_taps);
    TwoFingerDetector detector(cfg.detector, cfg.sample_rate, n_taps);
    std::vector<MedianFilter> medians(n_taps, MedianFilter(cfg.median_window));

    std::vector<double> filtered(n_taps, 0.0);
    std::vector<std::vector<double>> raw(n_taps);

    auto iterate = [&](std::vector<TapFrame>& pending) {
        report.stats.iterations += 1;
        const Batch batch = assembler.assemble(pending);
        pending.clear();
        if (batch.empty()) return;

        for (std::size_t tap = 0; tap < n_taps; ++tap) {
            raw[tap] = piecewise_slopes(batch, tap, cfg.samples_per_slope);
        }
        const std::size_t n_groups = batch.size() / cfg.samples_per_slope;
        for (std::size_t g = 0; g < n_groups; ++g) {
            for (std::size_t tap = 0; tap < n_taps; ++tap) {
                filtered[tap] = medians[tap].push(raw[tap][g]);
            }
            report.stats.slopes_per_tap += 1;
            const TapFrame& group_end = batch.frames[(g + 1) * cfg.samples_per_slope - 1];
            report.slider_trace.push_back(tracker.step(group_end, filtered));
        }
    };

    std::vector<TapFrame> pending;
    pending.reserve(cfg.new_per_iteration);
    for (const TapFrame& frame : frames) {
        report.stats.frames += 1;
        tracker.observe_frame(frame);
        if (auto win = detector.push(frame)) {
            report.stats.windows += 1;
            if (win->event) {
                report.events.push_back({win->window_start, win->tap, win->positive_bins,
                                         win->negative_bins, win->vote_streak});
            }
        }
        pending.push_back(frame);
        if (pending.size() == cfg.new_per_iteration) iterate(pending);
    }
    if (!pending.empty()) iterate(pending);

    return report;
}

namespace {
using nlohmann::ordered_json;
}

std::string report_to_json_text(const RunReport& report) {
    ordered_json doc;
    doc["config"] = nlohmann::ordered_json::parse(config_to_json_text(report.config));
    doc["seed"] = report.seed;
    doc["slider_trace"] = ordered_json::array();
    for (const SliderSample& s : report.slider_trace) {
        doc["slider_trace"].push_back({{"t", s.time},
                                       {"level", s.level},
                                       {"enabled", s.enabled},
                                       {"present", s.present},
                                       {"tap", s.tap}});
    }
    doc["events"] = ordered_json::array();
    for (const DetectionEvent& e : report.events) {
        doc["events"].push_back({{"t", e.time},
                                 {"tap", e.tap},
                                 {"positive_bins", e.positive_bins},
                                 {"negative_bins", e.negative_bins},
                                 {"vote", e.vote_streak}});
    }
    doc["stats"] = {{"frames", report.stats.frames},
                    {"iterations", report.stats.iterations},
                    {"slopes_per_tap", report.stats.slopes_per_tap},
                    {"windows", report.stats.windows}};
    return doc.dump(2) + "\n";
}

RunReport report_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("report: JSON parse error: ") + e.what());
    }
    RunReport report;
    if (doc.contains("config")) {
        report.config = config_from_json_text(doc["config"].dump());
    }
    report.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& s : doc.value("slider_trace", nlohmann::json::array())) {
        SliderSample sample;
        sample.time = s.at("t").get<double>();
        sample.level = s.at("level").get<double>();
        sample.enabled = s.at("enabled").get<bool>();
        sample.present = s.at("present").get<bool>();
        sample.tap = s.at("tap").get<int>();
        report.slider_trace.push_back(sample);
    }
    for (const auto& e : doc.value("events", nlohmann::json::array())) {
        DetectionEvent event;
        event.time = e.at("t").get<double>();
        event.tap = e.at("tap").get<int>();
        event.positive_bins = e.at("positive_bins").get<int>();
        event.negative_bins = e.at("negative_bins").get<int>();
        event.vote_streak = e.at("vote").get<std::size_t>();
        report.events.push_back(event);
    }
    if (doc.contains("stats")) {
        const auto& st = doc["stats"];
        report.stats.frames = st.value("frames", std::size_t{0});
        report.stats.iterations = st.value("iterations", std::size_t{0});
        report.stats.slopes_per_tap = st.value("slopes_per_tap", std::size_t{0});
        report.stats.windows = st.value("windows", std::size_t{0});
    }
    return report;
}

void save_report(const RunReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write " + path);
    out << report_to_json_text(report);
}

RunReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("report: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return report_from_json_text(buf.str());
}

} // namespace gradar
