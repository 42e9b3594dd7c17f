#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wqed/config.hpp"

namespace wqed {

inline constexpr std::string_view kVersion = "0.1.0";

struct CommandOutput {
    std::string csv;
    // Quantities computed by the run, recorded in the manifest as "derived.<key>".
    std::vector<std::pair<std::string, std::string>> derived;
    // Additional CSV files as (suffix appended to the output path, contents).
    std::vector<std::pair<std::string, std::string>> extra_files;
};

// Runs the command named by cfg. Sets the OpenMP thread count from "threads" (0 keeps the
// runtime default). Throws ConfigError for invalid parameters and NumericalError subclasses
// for numerical failures.
CommandOutput run_command(const RunConfig& cfg);

// Replayable manifest: every resolved key as "key = value", metadata as '#' comments.
std::string manifest_text(const RunConfig& cfg, const CommandOutput& output,
                          std::string_view timestamp);

// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

// Writes the CSV to "out", each extra file to out + suffix and the manifest to
// out + ".manifest". Returns the paths written.
std::vector<std::string> write_outputs(const RunConfig& cfg, const CommandOutput& output);

}  // namespace wqed
