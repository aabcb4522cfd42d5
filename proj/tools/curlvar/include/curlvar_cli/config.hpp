// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "curlvar/functional.hpp"
#include "curlvar/maxwell.hpp"

namespace curlvar::cli {

struct GridConfig {
  int n_r = 64;
  int n_z = 64;
  double r_max = 10.0;
  int z_len = 4;
};

struct PotentialConfig {
  std::string kind = "constant";  // constant | example
  double value = 1.0;
};

struct NonlinearityConfig {
  double p = 4.0;
  std::optional<double> q;      // comparison exponent; defaults to g.q or (2 + p) / 2
  std::string g_kind = "zero";  // zero | power
  double g_q = 3.0;
  double gamma = 1.0;
};

struct SolverConfig {
  double tol = 1e-6;
  int max_iters = 2000;
  std::string metric = "Q";  // Q | L2
  double armijo = 1e-4;
  int seeds = 32;            // random starts for the minimax bound
};

struct InitConfig {
  std::string kind = "bump";  // bump | random | zero
  std::uint64_t seed = 1;
  int z_shift = 0;            // axial cells
};

struct RayConfig {
  double t_lo = 0.05;
  double t_hi = 20.0;
  int points = 64;
};

struct CertifyConfig {
  int n_theta = 64;
  int tests = 5;
  int refine = 0;
  std::string pairing = "staggered";  // staggered | central
};

struct OutputConfig {
  std::string dir = "out";
};

struct InputConfig {
  std::string solution;  // CSV with columns r,z,u; empty means solve or reuse <out>/solution.csv
};

struct RunConfig {
  GridConfig grid;
  PotentialConfig potential;
  NonlinearityConfig nonlinearity;
  SolverConfig solver;
  InitConfig init;
  RayConfig ray;
  CertifyConfig certify;
  OutputConfig output;
  InputConfig input;
};

/// Parses and validates the key-value configuration text. Errors are
/// Error(config) naming the offending line, section and key.
RunConfig parse_config(std::string_view text);

/// Reads a file and parses it; unreadable files raise Error(io).
RunConfig load_config(const std::string& path);

/// Canonical text form with every default filled in; parses back to the same config.
std::string echo_config(const RunConfig& config);
nlohmann::json config_to_json(const RunConfig& config);

GridPtr make_grid(const RunConfig& config);
PotentialSpec make_potential(const RunConfig& config);
NonlinearitySpec make_nonlinearity(const RunConfig& config);

}  // namespace curlvar::cli
