// Pipeline configuration: one JSON file covering framing, tracking, and
// detection parameters. Every run report echoes the configuration it ran
// with, so results stay reproducible from the report alone.

#pragma once

#include "gradar/slider_tracker.hpp"
#include "gradar/twofinger_detector.hpp"

#include <cstddef>
#include <string>

namespace gradar {

struct PipelineConfig {
    // Stream geometry; must match the recording header.
    std::size_t n_taps = 5;
    double tap_spacing = cb1_tap_spacing();
    double sample_rate = 500.0;
    std::size_t taps_of_interest = 5;

    // Batching and slope extraction.
    std::size_t new_per_iteration = 8;  // N_n
    std::size_t samples_per_slope = 8;  // N_a, valid 5..20
    std::size_t median_window = 5;      // N_m, odd

    TrackerConfig tracker;
    DetectorConfig detector;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

PipelineConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const PipelineConfig& cfg);
PipelineConfig load_config(const std::string& path);
void save_config(const PipelineConfig& cfg, const std::string& path);

} // namespace gradar
