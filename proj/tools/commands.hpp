// SPDX-License-Identifier: Apache-2.0
//
// The nhssh commands. Each run writes its data files and exactly one manifest
// (manifest_<command>.json) into the output directory, also when it fails.
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 oracle mismatch.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace nhssh::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitOracle = 4;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kManifestSchema = "nhssh.manifest/1";

struct Options {
  std::filesystem::path out = "nhssh-out";
  /// OpenMP threads; 0 keeps the runtime default.
  int jobs = 0;
  /// CSV values at full working precision instead of csv_digits.
  bool full_precision = false;
};

const std::vector<std::string>& command_names();

/// Runs one command and returns its exit code. Human-readable progress goes to `log`.
int run_command(const std::string& command, const RunConfig& config, const Options& opts, std::ostream& log);

/// Parses argv (command, --config, --digits, --out, --jobs, --full-precision, --set)
/// and runs the command.
int main_entry(int argc, char** argv);

}  // namespace nhssh::cli
