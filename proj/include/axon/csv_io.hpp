#pragma once

#include <string>

#include "axon/scenario.hpp"

namespace axon {

struct OutputBundle {
  std::string run_csv;
  std::string events_csv;
  std::string summary_json;
  std::string config_echo;
};

/// Writes run.csv, events.csv, summary.json and config_echo.cfg under dir.
/// Output is bit-stable: fixed column order, %.16e scientific notation.
OutputBundle write_outputs(const RunRecord& run, const std::string& dir);

std::string run_csv_text(const RunRecord& run);
std::string events_csv_text(const RunRecord& run);
std::string summary_json_text(const RunRecord& run);

std::string sweep_csv_text(const std::vector<SweepRow>& rows);

}  // namespace axon
