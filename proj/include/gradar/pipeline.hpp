// End-to-end processing: batches a tap-frame stream, extracts filtered
// phase slopes per tap, and feeds the slider tracker and the two-finger
// detector side by side. The resulting report is deterministic for a
// given (stream, config) pair.

#pragma once

#include "gradar/config.hpp"
#include "gradar/slider_tracker.hpp"
#include "gradar/twofinger_detector.hpp"
#include "gradar/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gradar {

struct DetectionEvent {
    double time = 0.0;  // window start, seconds
    int tap = -1;
    int positive_bins = 0;
    int negative_bins = 0;
    std::size_t vote_streak = 0;
};

// Deterministic per-stage counters; wall-clock timing never enters the
// report so identical runs stay byte-identical.
struct StageStats {
    std::size_t frames = 0;
    std::size_t iterations = 0;
    std::size_t slopes_per_tap = 0;
    std::size_t windows = 0;
};

struct RunReport {
    PipelineConfig config;
    std::uint64_t seed = 0;
    std::vector<SliderSample> slider_trace;
    std::vector<DetectionEvent> events;
    StageStats stats;
};

RunReport run_pipeline(const std::vector<TapFrame>& frames, const PipelineConfig& cfg,
                       std::uint64_t seed = 0);

std::string report_to_json_text(const RunReport& report);
RunReport report_from_json_text(const std::string& text);
void save_report(const RunReport& report, const std::string& path);
RunReport load_report(const std::string& path);

} // namespace gradar
