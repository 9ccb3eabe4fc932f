#include "gradar/config.hpp"

#include "json.hpp"


#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gradar {

void PipelineConfig::validate() const {
    if (n_taps < 1) throw std::invalid_argument("config: n_taps must be >= 1");
    if (tap_spacing <= 0.0) throw std::invalid_argument("config: tap_spacing_m must be > 0");
    if (sample_rate <= 0.0) throw std::invalid_argument("config: sample_rate_hz must be > 0");
    if (taps_of_interest < 1 || taps_of_interest > n_taps) {
        throw std::invalid_argument("config: taps_of_interest must be in [1, n_taps]");
    }
    if (new_per_iteration < 1) {
        throw std::invalid_argument("config: new_per_iteration must be >= 1");
    }
    if (samples_per_slope < 5 || samples_per_slope > 20) {
        throw std::invalid_argument("config: samples_per_slope must be in [5, 20]");
    }
    if (median_window < 1 || median_window % 2 == 0) {
        throw std::invalid_argument("config: median_window must be odd and >= 1");
    }
    if (tracker.range <= 0.0) throw std::invalid_argument("config: tracker.range must be > 0");
    if (tracker.attenuation <= 0.0) {
        throw std::invalid_argument("config: tracker.attenuation must be > 0");
    }
    if (tracker.slope_gate_threshold < 0.0 || tracker.magnitude_threshold < 0.0 ||
        tracker.std_threshold < 0.0) {
        throw std::invalid_argument("config: tracker thresholds must be >= 0");
    }
    if (tracker.std_window < 2) {
        throw std::invalid_argument("config: tracker.std_window must be >= 2");
    }
    if (detector.window_length < 8) {
        throw std::invalid_argument("config: detector.window_length must be >= 8");
    }
    if (detector.hop < 1 || detector.hop > detector.window_length) {
        throw std::invalid_argument("config: detector.hop must be in [1, window_length]");
    }
    if (detector.dc_exclusion_hz <= 0.0) {
        throw std::invalid_argument("config: detector.dc_exclusion_hz must be > 0");
    }
    if (detector.discard_freq_hz <= detector.dc_exclusion_hz) {
        throw std::invalid_argument(
            "config: detector.discard_freq_hz must exceed dc_exclusion_hz");
    }
    if (detector.vote_windows < 3 || detector.vote_windows > 5) {
        throw std::invalid_argument("config: detector.vote_windows must be in [3, 5]");
    }
    if (detector.spectral_threshold < 0.0) {
        throw std::invalid_argument("config: detector.spectral_threshold must be >= 0");
    }
}

namespace {

using nlohmann::json;

TapStrategy strategy_from_string(const std::string& name) {
    if (name == "max-magnitude") return TapStrategy::max_magnitude;
    if (name == "average") return TapStrategy::average;
    if (name == "max-slope") return TapStrategy::max_slope;
    throw std::invalid_argument("config: unknown tap_strategy '" + name + "'");
}

std::string strategy_to_string(TapStrategy s) {
    switch (s) {
    case TapStrategy::max_magnitude: return "max-magnitude";
    case TapStrategy::average: return "average";
    case TapStrategy::max_slope: return "max-slope";
    }
    return "max-magnitude";
}

PresenceRule presence_from_string(const std::string& name) {
    if (name == "magnitude") return PresenceRule::magnitude;
    if (name == "magnitude-std") return PresenceRule::magnitude_std;
    throw std::invalid_argument("config: unknown presence_rule '" + name + "'");
}

std::string presence_to_string(PresenceRule r) {
    return r == PresenceRule::magnitude ? "magnitude" : "magnitude-std";
}

} // namespace

PipelineConfig config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }

    PipelineConfig cfg;
    cfg.n_taps = doc.value("n_taps", cfg.n_taps);
    cfg.tap_spacing = doc.value("tap_spacing_m", cfg.tap_spacing);
    cfg.sample_rate = doc.value("sample_rate_hz", cfg.sample_rate);
    cfg.taps_of_interest = doc.value("taps_of_interest", std::min(cfg.n_taps, std::size_t{5}));
    cfg.new_per_iteration = doc.value("new_per_iteration", cfg.new_per_iteration);
    cfg.samples_per_slope = doc.value("samples_per_slope", cfg.samples_per_slope);
    cfg.median_window = doc.value("median_window", cfg.median_window);

    if (doc.contains("tracker")) {
        const json& t = doc["tracker"];
        TrackerConfig& tr = cfg.tracker;
        tr.range = t.value("range", tr.range);
        tr.attenuation = t.value("attenuation", tr.attenuation);
        tr.slope_gate_threshold = t.value("slope_gate", tr.slope_gate_threshold);
        tr.magnitude_threshold = t.value("magnitude_threshold", tr.magnitude_threshold);
        tr.std_threshold = t.value("std_threshold", tr.std_threshold);
        tr.std_window = t.value("std_window", tr.std_window);
        if (t.contains("tap_strategy")) {
            tr.tap_strategy = strategy_from_string(t["tap_strategy"].get<std::string>());
        }
        if (t.contains("presence_rule")) {
            tr.presence_rule = presence_from_string(t["presence_rule"].get<std::string>());
        }
        tr.invert_polarity = t.value("invert_polarity", tr.invert_polarity);
    }

    if (doc.contains("detector")) {
        const json& d = doc["detector"];
        DetectorConfig& det = cfg.detector;
        det.window_length = d.value("window_length", det.window_length);
        det.hop = d.value("hop", det.hop);
        det.spectral_threshold = d.value("spectral_threshold", det.spectral_threshold);
        det.min_positive_bins = d.value("min_positive_bins", det.min_positive_bins);
        det.min_negative_bins = d.value("min_negative_bins", det.min_negative_bins);
        det.dc_exclusion_hz = d.value("dc_exclusion_hz", det.dc_exclusion_hz);
        det.discard_phase_threshold = d.value("discard_phase_rad", det.discard_phase_threshold);
        det.discard_slope_threshold = d.value("discard_slope", det.discard_slope_threshold);
        det.discard_freq_hz = d.value("discard_freq_hz", det.discard_freq_hz);
        det.discard_min_positive_bins =
            d.value("discard_min_positive_bins", det.discard_min_positive_bins);
        det.discard_min_negative_bins =
            d.value("discard_min_negative_bins", det.discard_min_negative_bins);
        det.enable_discards = d.value("enable_discards", det.enable_discards);
        det.vote_windows = d.value("vote_windows", det.vote_windows);
        det.samples_per_slope = cfg.samples_per_slope;
        det.median_window = cfg.median_window;
    } else {
        cfg.detector.samples_per_slope = cfg.samples_per_slope;
        cfg.detector.median_window = cfg.median_window;
    }

    cfg.validate();
    return cfg;
}

std::string config_to_json_text(const PipelineConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["n_taps"] = cfg.n_taps;
    doc["tap_spacing_m"] = cfg.tap_spacing;
    doc["sample_rate_hz"] = cfg.sample_rate;
    doc["taps_of_interest"] = cfg.taps_of_interest;
    doc["new_per_iteration"] = cfg.new_per_iteration;
    doc["samples_per_slope"] = cfg.samples_per_slope;
    doc["median_window"] = cfg.median_window;
    doc["tracker"] = {{"range", cfg.tracker.range},
                      {"attenuation", cfg.tracker.attenuation},
                      {"slope_gate", cfg.tracker.slope_gate_threshold},
                      {"magnitude_threshold", cfg.tracker.magnitude_threshold},
                      {"std_threshold", cfg.tracker.std_threshold},
                      {"std_window", cfg.tracker.std_window},
                      {"tap_strategy", strategy_to_string(cfg.tracker.tap_strategy)},
                      {"presence_rule", presence_to_string(cfg.tracker.presence_rule)},
                      {"invert_polarity", cfg.tracker.invert_polarity}};
    doc["detector"] = {{"window_length", cfg.detector.window_length},
                       {"hop", cfg.detector.hop},
                       {"spectral_threshold", cfg.detector.spectral_threshold},
                       {"min_positive_bins", cfg.detector.min_positive_bins},
                       {"min_negative_bins", cfg.detector.min_negative_bins},
                       {"dc_exclusion_hz", cfg.detector.dc_exclusion_hz},
                       {"discard_phase_rad", cfg.detector.discard_phase_threshold},
                       {"discard_slope", cfg.detector.discard_slope_threshold},
                       {"discard_freq_hz", cfg.detector.discard_freq_hz},
                       {"discard_min_positive_bins", cfg.detector.discard_min_positive_bins},
                       {"discard_min_negative_bins", cfg.detector.discard_min_negative_bins},
                       {"enable_discards", cfg.detector.enable_discards},
                       {"vote_windows", cfg.detector.vote_windows}};
    return doc.dump(2) + "\n";
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

void save_config(const PipelineConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << config_to_json_text(cfg);
}

} // namespace gradar
