// Command-line front end: simulate | run | calibrate | export.
//
// Exit codes: 0 success, 2 input-schema error (bad scene/config/recording
// files or arguments), 3 config/recording mismatch, 4 runtime numeric
// failure. Commands are plain functions so tests can drive them
// in-process exactly as the binary does.

#pragma once

#include "gradar/pipeline.hpp"
#include "gradar/recording.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace gradar {

// Recording header disagrees with the supplied config (tap count,
// spacing, or rate). Maps to exit code 3.
class ConfigMismatchError : public std::runtime_error {
public:
    explicit ConfigMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct CalibrateOptions {
    double margin = 2.0;           // multiplier on the measured floors
    double max_gesture_speed = 0.25;  // m/s the slope gate must stay above
    double full_range_travel = 0.1;   // m of hand travel spanning [-L, L]
    double wavelength = 0.005;        // m
};

int cmd_simulate(const std::string& scene_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override, bool quiet);

int cmd_run(const std::string& recording_path, const std::optional<std::string>& config_path,
            const std::string& report_path, std::uint64_t seed, bool quiet);

int cmd_calibrate(const std::string& recording_path, const std::string& config_out_path,
                  const CalibrateOptions& options, bool quiet);

int cmd_export(const std::string& report_path, const std::string& out_prefix, bool quiet);

// Derives thresholds from an idle/noise recording; pure so tests can
// check the numbers without touching the filesystem.
PipelineConfig calibrate_config(const TapRecording& recording, const CalibrateOptions& options);

void export_report_csv(const RunReport& report, const std::string& trace_path,
                       const std::string& events_path);

// Full argv-style entry point used by the binary.
int cli_main(int argc, const char* const* argv);

} // namespace gradar
