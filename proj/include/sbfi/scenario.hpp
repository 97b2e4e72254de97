#pragma once

// JSON-configured experiments that emit CSV tables.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbfi/csv.hpp"
#include "sbfi/qmat.hpp"

namespace sbfi {

/// A configuration that cannot be run; the message names the violated constraint.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunOptions {
  std::uint64_t seed = 20240611;
  unsigned threads = 1;
};

struct ScenarioOutput {
  std::string file_name;
  CsvTable table;
  std::vector<std::string> summary;  // key=value lines for stdout
  bool validation_passed = true;
};

/// Named preset ("P2plus", "MaxMixed", "0", "01", ...) or an object
/// {"XState": {...}} / {"MaxMixed": {"qubits": k}}. Throws ConfigError.
DensityMatrix parse_state(const nlohmann::json& spec);

/// Validates every parameter, then computes. Throws ConfigError before any
/// computation starts.
ScenarioOutput run_scenario(const nlohmann::json& config, const RunOptions& options = {});

/// Parses the file and runs it. Throws ConfigError on unreadable or
/// malformed input.
ScenarioOutput run_scenario_file(const std::filesystem::path& path, const RunOptions& options = {});

}  // namespace sbfi
