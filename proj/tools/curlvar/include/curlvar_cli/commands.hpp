// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "curlvar_cli/config.hpp"

namespace curlvar::cli {

enum class Command { check, solve, ray, reconstruct, certify };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

struct RunOptions {
  std::optional<std::string> out;     // overrides output.dir
  std::optional<std::uint64_t> seed;  // overrides init.seed
  std::optional<int> refine;          // overrides certify.refine
};

// Gate thresholds applied by `certify`.
inline constexpr double kEnergyGapTol = 2e-2;
inline constexpr double kWeakMismatchTol = 1e-3;
inline constexpr double kMinOrder = 1.8;

struct RunResult {
  int exit_code = 0;  // 0 when every gate passed, 1 otherwise
  nlohmann::json report;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs one command and writes its artifacts under the output directory.
/// Module and I/O failures propagate as curlvar::Error.
RunResult run(Command command, RunConfig config, const RunOptions& options);

/// {"error": {"kind": ..., "message": ...}}
nlohmann::json error_json(const std::exception& e);

}  // namespace curlvar::cli
