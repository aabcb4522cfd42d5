// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "curlvar/error.hpp"
#include "curlvar_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nehari-manifold solver and Maxwell equivalence certificates for the reduced curl-curl problem"};
  app.set_version_flag("--version", CURLVAR_VERSION);

  std::string command;
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> refine;
  bool echo = false;
  app.add_option("command", command, "check | solve | ray | reconstruct | certify")
      ->required()
      ->check(CLI::IsMember({"check", "solve", "ray", "reconstruct", "certify"}));
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", out, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "seed (overrides init.seed)");
  app.add_option("--refine", refine, "extra refinement levels for certify (0..3)");
  app.add_flag("--echo-config", echo, "print the configuration with defaults filled in");
  CLI11_PARSE(app, argc, argv);

  try {
    const curlvar::cli::RunConfig config = curlvar::cli::load_config(config_path);
    if (echo) std::cout << curlvar::cli::echo_config(config);
    const auto cmd = curlvar::cli::parse_command(command);
    const auto result = curlvar::cli::run(*cmd, config, {out, seed, refine});
    for (const auto& p : result.artifacts) std::cout << p.string() << "\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << curlvar::cli::error_json(e).dump() << std::endl;
    return 2;
  }
}
