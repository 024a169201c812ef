#pragma once

#include <filesystem>
#include <string>

#include "smagg/netsim.hpp"

namespace smagg {

/// Structured run report. Stable key order; no timing data, so identical
/// scenarios serialize to identical bytes.
std::string run_report_json(const RunReport& report, const ScenarioConfig& config);

/// One row per frame: frame,timestamp,attacked,status,reason,recovered_raw,truth_raw
std::string run_report_csv(const RunReport& report);

/// Writes run_report.json and frames.csv into `dir` (created if needed).
void write_run_report(const RunReport& report, const ScenarioConfig& config,
                      const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace smagg
