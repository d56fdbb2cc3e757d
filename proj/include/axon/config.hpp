#pragma once

#include <string>

#include "axon/scenario.hpp"

namespace axon {

/// Parses the flat sectioned key=value config text. Unknown sections/keys,
/// malformed values, bad unit suffixes, and invariant violations raise
/// ConfigError with a line-numbered message. Values accept the unit suffixes
/// "um" (micrometers) and "min" (minutes); everything else is SI.
ScenarioConfig parse_config(const std::string& text);

/// Reads and parses a config file; an empty path yields the defaults.
ScenarioConfig load_config(const std::string& path, const std::string& preset = "");

/// Applies a named preset. "paper-fig2" is the bundled reference setup
/// (it equals the defaults).
void apply_preset(ScenarioConfig& cfg, const std::string& name);

/// Canonical text form; parse(serialize_config(cfg)) reproduces cfg exactly.
std::string serialize_config(const ScenarioConfig& cfg);

const char* to_string(ControllerMode m);

}  // namespace axon
