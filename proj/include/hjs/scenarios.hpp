#pragma once

#include <string>

#include <json.hpp>

#include "hjs/config.hpp"

namespace hjs {

enum ExitStatus : int { kExitPass = 0, kExitToleranceFailure = 1, kExitConfigError = 2, kExitNumerical = 3 };

struct ScenarioResult {
    int exit_status = kExitPass;
    nlohmann::ordered_json report;
};

// Runs a validated scenario, writing series.csv (time-series scenarios),
// report.json and any scenario-specific tables into cfg.outdir. Library
// errors are caught, mapped onto an exit status and recorded in report.json.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Exit status for an exception thrown by the library.
int exit_status_for(const std::exception& e);

// report.json for a run that failed before a configuration existed.
void write_error_report(const std::string& outdir, int exit_status, const std::string& message,
                        const std::string& scenario = "");

}  // namespace hjs
