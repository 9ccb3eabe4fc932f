#include "gradar/scene_sim.hpp"

#include "gradar/rng.hpp"


#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gradar {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Multiplicative instability factor as a step function over the scene.
struct AlphaTrack {
    std::vector<double> event_times;
    std::vector<cplx> values;  // values[k] holds on [event_times[k], event_times[k+1])

    cplx at(double t) const {
        // Linear walk is fine: callers advance monotonically, tracks are short.
        cplx v(1.0, 0.0);
        for (std::size_t k = 0; k < event_times.size(); ++k) {
            if (event_times[k] <= t) v = values[k];
            else break;
        }
        return v;
    }
};

AlphaTrack build_alpha_track(const InstabilityModel& model, double duration, Rng rng) {
    AlphaTrack track;
    if (!model.active()) return track;
    double t = 0.0;
    cplx alpha(1.0, 0.0);
    while (true) {
        t += rng.next_exponential(model.event_rate);
        if (t >= duration) break;
        const double theta = rng.uniform(-model.phase_jitter_scale, model.phase_jitter_scale);
        const double g = rng.uniform(-model.gain_jitter_scale, model.gain_jitter_scale);
        alpha *= std::polar(1.0 + g, theta);
        track.event_times.push_back(t);
        track.values.push_back(alpha);
    }
    return track;
}

void validate_radio(const RadioConfig& radio) {
    if (radio.wavelength <= 0.0) throw std::invalid_argument("radio.wavelength_m must be > 0");
    if (radio.packet_rate <= 0.0) throw std::invalid_argument("radio.packet_rate_hz must be > 0");
    if (radio.tap_spacing <= 0.0) throw std::invalid_argument("radio.tap_spacing_m must be > 0");
    if (radio.n_taps < 1) throw std::invalid_argument("radio.n_taps must be >= 1");
}

} // namespace

double Target::range_at(double t) const {
    if (keyframes.empty()) throw std::invalid_argument("target has no keyframes");
    if (t <= keyframes.front().time) return keyframes.front().range;
    if (t >= keyframes.back().time) return keyframes.back().range;
    for (std::size_t k = 1; k < keyframes.size(); ++k) {
        if (t <= keyframes[k].time) {
            const Keyframe& a = keyframes[k - 1];
            const Keyframe& b = keyframes[k];
            if (b.time == a.time) return b.range;
            const double w = (t - a.time) / (b.time - a.time);
            return a.range + w * (b.range - a.range);
        }
    }
    return keyframes.back().range;
}

int range_to_tap(double range, const RadioConfig& radio) {
    const long tap = std::lround(range / radio.tap_spacing);
    if (tap < 0 || tap >= static_cast<long>(radio.n_taps)) return -1;
    return static_cast<int>(tap);
}

std::vector<TapFrame> simulate_tap_stream(const Scene& scene) {
    validate_radio(scene.radio);
    if (scene.duration <= 0.0) throw std::invalid_argument("scene duration must be > 0");

    const RadioConfig& radio = scene.radio;
    const std::size_t n_frames =
        static_cast<std::size_t>(std::floor(scene.duration * radio.packet_rate));
    const double dt = 1.0 / radio.packet_rate;

    Rng root(scene.seed);
    std::vector<AlphaTrack> alphas;
    alphas.reserve(scene.targets.size());
    for (std::size_t j = 0; j < scene.targets.size(); ++j) {
        alphas.push_back(build_alpha_track(scene.targets[j].instability, scene.duration,
                                           root.fork(0x7461 + j)));
    }
    Rng noise = root.fork(0x6e6f);
    const double sigma_component = std::sqrt(radio.noise_variance / 2.0);

    std::vector<TapFrame> frames(n_frames);
    for (std::size_t k = 0; k < n_frames; ++k) {
        TapFrame& frame = frames[k];
        const double t = static_cast<double>(k) * dt;
        frame.timestamp = t;
        frame.tap_spacing = radio.tap_spacing;
        frame.taps.assign(radio.n_taps, cplx(0.0, 0.0));

        for (std::size_t j = 0; j < scene.targets.size(); ++j) {
            const Target& target = scene.targets[j];
            const double r = target.range_at(t);
            const int tap = range_to_tap(r, radio);
            if (tap < 0) continue;
            const double phi = -kFourPi * r / radio.wavelength;
            frame.taps[static_cast<std::size_t>(tap)] +=
                alphas[j].at(t) * std::polar(target.amplitude, phi);
        }
        if (radio.noise_variance > 0.0) {
            for (std::size_t i = 0; i < radio.n_taps; ++i) {
                frame.taps[i] += cplx(sigma_component * noise.next_normal(),
                                      sigma_component * noise.next_normal());
            }
        }
    }
    return frames;
}

std::vector<std::vector<cplx>> simulate_ce_waveform(const Scene& scene, const GolayPair& pair) {
    validate_radio(scene.radio);
    if (scene.duration <= 0.0) throw std::invalid_argument("scene duration must be > 0");

    const RadioConfig& radio = scene.radio;
    const std::size_t n = pair.length();
    const std::size_t n_frames =
        static_cast<std::size_t>(std::floor(scene.duration * radio.packet_rate));
    const double dt = 1.0 / radio.packet_rate;
    const std::size_t field_len = 2 * (n + radio.n_taps);
    const std::size_t seg = n + radio.n_taps;

    Rng root(scene.seed);
    std::vector<AlphaTrack> alphas;
    alphas.reserve(scene.targets.size());
    for (std::size_t j = 0; j < scene.targets.size(); ++j) {
        alphas.push_back(build_alpha_track(scene.targets[j].instability, scene.duration,
                                           root.fork(0x7461 + j)));
    }
    Rng noise = root.fork(0x6e6f);
    // Correlating 2N chips multiplies noise power by 2N while the tap gain
    // is 2N; a per-chip variance of 2N * noise_variance keeps the per-tap
    // SNR identical to the tap-stream path.
    const double chip_variance = 2.0 * static_cast<double>(n) * radio.noise_variance;
    const double sigma_component = std::sqrt(chip_variance / 2.0);

    std::vector<std::vector<cplx>> blocks(n_frames);
    for (std::size_t k = 0; k < n_frames; ++k) {
        const double t = static_cast<double>(k) * dt;
        std::vector<cplx>& block = blocks[k];
        block.assign(field_len, cplx(0.0, 0.0));

        for (std::size_t j = 0; j < scene.targets.size(); ++j) {
            const Target& target = scene.targets[j];
            const double r = target.range_at(t);
            const int tap = range_to_tap(r, radio);
            if (tap < 0) continue;
            const double phi = -kFourPi * r / radio.wavelength;
            const cplx gain = alphas[j].at(t) * std::polar(target.amplitude, phi);
            const std::size_t d = static_cast<std::size_t>(tap);
            for (std::size_t m = 0; m < n; ++m) {
                block[d + m] += gain * static_cast<double>(pair.seq_a[m]);
                block[seg + d + m] += gain * static_cast<double>(pair.seq_b[m]);
            }
        }
        if (radio.noise_variance > 0.0) {
            for (std::size_t i = 0; i < field_len; ++i) {
                block[i] += cplx(sigma_component * noise.next_normal(),
                                 sigma_component * noise.next_normal());
            }
        }
    }
    return blocks;
}

Scene make_gesture_scene(GestureKind kind, const GestureParams& p) {
    if (p.speed < 0.0 || p.speed > 2.0) {
        throw std::invalid_argument("gesture speed must be within [0, 2] m/s");
    }
    if (p.start_range < 0.0 || p.start_range > 0.4) {
        throw std::invalid_argument("gesture start range must be within [0, 0.4] m");
    }
    if (p.duration <= 0.0) throw std::invalid_argument("gesture duration must be > 0");
    if (p.lead_in < 0.0 || p.lead_in >= p.duration) {
        throw std::invalid_argument("gesture lead-in must be within [0, duration)");
    }
    if (p.amplitude <= 0.0 || p.palm_amplitude <= 0.0) {
        throw std::invalid_argument("gesture amplitudes must be > 0");
    }

    const double t0 = p.lead_in;
    const double t1 = (p.motion_duration > 0.0)
                          ? std::min(p.duration, t0 + p.motion_duration)
                          : p.duration;
    const double move_s = t1 - t0;
    if (move_s <= 0.0) throw std::invalid_argument("gesture motion window is empty");

    Scene scene;
    scene.seed = p.seed;
    scene.duration = p.duration;
    scene.radio.noise_variance = p.noise_variance;

    auto moving_target = [&](double from, double to) {
        Target tgt;
        tgt.amplitude = p.amplitude;
        tgt.instability = p.instability;
        tgt.keyframes = {{0.0, from}, {t0, from}, {t1, to}, {p.duration, to}};
        return tgt;
    };

    switch (kind) {
    case GestureKind::idle: {
        Target tgt;
        tgt.amplitude = p.amplitude;
        tgt.instability = p.instability;
        tgt.keyframes = {{0.0, p.start_range}, {p.duration, p.start_range}};
        scene.targets.push_back(tgt);
        break;
    }
    case GestureKind::slider_in:
    case GestureKind::slider_out: {
        const double sign = (kind == GestureKind::slider_in) ? -1.0 : 1.0;
        const double end = p.start_range + sign * p.speed * move_s;
        if (end < 0.0 || end > 0.4) {
            throw std::invalid_argument("slider gesture leaves the 0-0.4 m range envelope");
        }
        scene.targets.push_back(moving_target(p.start_range, end));
        break;
    }
    case GestureKind::two_finger: {
        // Index and middle finger swap positions around the palm while the
        // palm stays put; at every instant their radial velocities oppose.
        const double half_travel = 0.5 * p.speed * move_s;
        if (p.start_range - half_travel < 0.0 || p.start_range + half_travel > 0.4) {
            throw std::invalid_argument("two-finger gesture leaves the range envelope");
        }
        Target palm;
        palm.amplitude = p.palm_amplitude;
        palm.instability = p.instability;
        palm.keyframes = {{0.0, p.start_range}, {p.duration, p.start_range}};
        scene.targets.push_back(palm);
        scene.targets.push_back(
            moving_target(p.start_range - half_travel, p.start_range + half_travel));
        scene.targets.push_back(
            moving_target(p.start_range + half_travel, p.start_range - half_travel));
        break;
    }
    case GestureKind::swipe: {
        // Fast in-and-out pass: approach at full speed, retreat at full
        // speed, no dwell.
        const double near = p.start_range - p.speed * (move_s / 2.0);
        if (near < 0.0) {
            throw std::invalid_argument("swipe overshoots zero range; reduce speed or duration");
        }
        Target tgt;
        tgt.amplitude = p.amplitude;
        tgt.instability = p.instability;
        tgt.keyframes = {{0.0, p.start_range},
                         {t0, p.start_range},
                         {0.5 * (t0 + t1), near},
                         {t1, p.start_range},
                         {p.duration, p.start_range}};
        scene.targets.push_back(tgt);
        break;
    }
    }
    return scene;
}

GestureKind gesture_kind_from_string(const std::string& name) {
    if (name == "idle") return GestureKind::idle;
    if (name == "slider-in") return GestureKind::slider_in;
    if (name == "slider-out") return GestureKind::slider_out;
    if (name == "two-finger") return GestureKind::two_finger;
    if (name == "swipe") return GestureKind::swipe;
    throw std::invalid_argument("unknown gesture kind: " + name);
}

namespace {

using nlohmann::json;

double require_number(const json& node, const char* field) {
    if (!node.contains(field) || !node[field].is_number()) {
        throw std::invalid_argument(std::string("scene: missing or non-numeric field '") +
                                    field + "'");
    }
    return node[field].get<double>();
}

InstabilityModel instability_from_json(const json& node) {
    InstabilityModel model;
    model.event_rate = node.value("event_rate", 0.0);
    model.phase_jitter_scale = node.value("phase_jitter_scale", 0.0);
    model.gain_jitter_scale = node.value("gain_jitter_scale", 0.0);
    if (model.event_rate < 0.0 || model.phase_jitter_scale < 0.0 || model.gain_jitter_scale < 0.0) {
        throw std::invalid_argument("scene: instability fields must be >= 0");
    }
    return model;
}

} // namespace

Scene scene_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scene: JSON parse error: ") + e.what());
    }

    Scene scene;
    if (!doc.contains("targets") || !doc["targets"].is_array() || doc["targets"].empty()) {
        throw std::invalid_argument("scene: 'targets' must be a non-empty array");
    }
    for (const auto& tnode : doc["targets"]) {
        Target target;
        if (!tnode.contains("keyframes") || !tnode["keyframes"].is_array() ||
            tnode["keyframes"].empty()) {
            throw std::invalid_argument("scene: target 'keyframes' must be a non-empty array");
        }
        double prev_t = -1.0;
        for (const auto& kf : tnode["keyframes"]) {
            if (!kf.is_array() || kf.size() != 2 || !kf[0].is_number() || !kf[1].is_number()) {
                throw std::invalid_argument("scene: keyframe entries must be [time_s, range_m]");
            }
            Keyframe frame{kf[0].get<double>(), kf[1].get<double>()};
            if (frame.range < 0.0) throw std::invalid_argument("scene: keyframe range must be >= 0");
            if (frame.time < prev_t) {
                throw std::invalid_argument("scene: keyframes must be sorted by time");
            }
            prev_t = frame.time;
            target.keyframes.push_back(frame);
        }
        target.amplitude = require_number(tnode, "amplitude");
        if (target.amplitude <= 0.0) {
            throw std::invalid_argument("scene: target amplitude must be > 0");
        }
        if (tnode.contains("instability")) {
            target.instability = instability_from_json(tnode["instability"]);
        }
        scene.targets.push_back(std::move(target));
    }

    if (doc.contains("radio")) {
        const json& r = doc["radio"];
        scene.radio.wavelength = r.value("wavelength_m", scene.radio.wavelength);
        scene.radio.tap_spacing = r.value("tap_spacing_m", scene.radio.tap_spacing);
        scene.radio.packet_rate = r.value("packet_rate_hz", scene.radio.packet_rate);
        scene.radio.n_taps = r.value("n_taps", scene.radio.n_taps);
        scene.radio.pulses_per_reading =
            r.value("pulses_per_reading", scene.radio.pulses_per_reading);
        scene.radio.noise_variance = r.value("noise_variance", scene.radio.noise_variance);
        if (scene.radio.noise_variance < 0.0) {
            throw std::invalid_argument("scene: radio.noise_variance must be >= 0");
        }
    }
    validate_radio(scene.radio);

    scene.seed = doc.value("seed", std::uint64_t{1});
    scene.duration = require_number(doc, "duration_s");
    if (scene.duration <= 0.0) throw std::invalid_argument("scene: duration_s must be > 0");
    return scene;
}

std::string scene_to_json_text(const Scene& scene) {
    nlohmann::ordered_json doc;
    doc["targets"] = nlohmann::ordered_json::array();
    for (const Target& target : scene.targets) {
        nlohmann::ordered_json tnode;
        tnode["keyframes"] = nlohmann::ordered_json::array();
        for (const Keyframe& kf : target.keyframes) {
            tnode["keyframes"].push_back({kf.time, kf.range});
        }
        tnode["amplitude"] = target.amplitude;
        tnode["instability"] = {{"event_rate", target.instability.event_rate},
                                {"phase_jitter_scale", target.instability.phase_jitter_scale},
                                {"gain_jitter_scale", target.instability.gain_jitter_scale}};
        doc["targets"].push_back(tnode);
    }
    doc["radio"] = {{"wavelength_m", scene.radio.wavelength},
                    {"tap_spacing_m", scene.radio.tap_spacing},
                    {"packet_rate_hz", scene.radio.packet_rate},
                    {"n_taps", scene.radio.n_taps},
                    {"pulses_per_reading", scene.radio.pulses_per_reading},
                    {"noise_variance", scene.radio.noise_variance}};
    doc["seed"] = scene.seed;
    doc["duration_s"] = scene.duration;
    return doc.dump(2) + "\n";
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scene: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scene_from_json_text(buf.str());
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("scene: cannot write " + path);
    out << scene_to_json_text(scene);
}

} // namespace gradar
