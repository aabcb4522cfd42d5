// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "curlvar/error.hpp"
#include "curlvar/solver.hpp"
#include "curlvar_cli/commands.hpp"
#include "curlvar_cli/config.hpp"
#include "curlvar_cli/io.hpp"

using namespace curlvar;
using namespace curlvar::cli;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& sub) { return s.find(sub) != std::string::npos; }

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("curlvar_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("configuration parsing") {
  const RunConfig c = parse_config(R"(
# comment
[grid]
n_r = 32   # trailing comment
n_z = 16
r_max = 6.5
[f]
p = 5
[g]
kind = "power"
q = 3.5
gamma = 0.5
solver.tol = 1e-7
)");
  CHECK(c.grid.n_r == 32);
  CHECK(c.grid.n_z == 16);
  CHECK(c.grid.r_max == 6.5);
  CHECK(c.grid.z_len == 4);
  CHECK(c.nonlinearity.p == 5.0);
  CHECK(c.nonlinearity.g_kind == "power");
  CHECK(c.nonlinearity.g_q == 3.5);
  CHECK(c.nonlinearity.gamma == 0.5);
  CHECK(c.solver.tol == 1e-7);
  CHECK(c.certify.pairing == "staggered");

  const std::string echoed = echo_config(c);
  CHECK(echo_config(parse_config(echoed)) == echoed);
  CHECK(config_to_json(parse_config(echoed)) == config_to_json(c));
  CHECK(config_to_json(c)["grid"]["n_r"] == 32);
}

TEST_CASE("configuration errors name the offending entry") {
  CHECK(contains(config_error("[grid]\nbogus = 1\n"), "line 2: unknown key 'bogus' in section [grid]"));
  CHECK(contains(config_error("[nope]\n"), "unknown section [nope]"));
  CHECK(contains(config_error("[grid]\nn_r = 8\nn_r = 9\n"), "duplicate key 'n_r'"));
  CHECK(contains(config_error("[grid]\nn_r = abc\n"), "expected an integer"));
  CHECK(contains(config_error("[f]\np = 7\n"), "(F1): 2 < p < 6 violated (f.p = 7)"));
  CHECK(contains(config_error("[f]\np = 4\n[g]\nkind = power\nq = 4.5\n"), "(G1): 2 < q < p violated"));
  CHECK(contains(config_error("[grid]\nz_len = 2.5\n"), "z_len must be a positive integer"));
  CHECK(contains(config_error("[potential]\nkind = quartic\n"), "expected one of"));
  CHECK(contains(config_error("n_r = 3\n"), "outside any section"));
  CHECK_THROWS_AS(load_config("/nonexistent/curlvar.conf"), Error);
}

TEST_CASE("solution CSV round trip is exact") {
  const GridPtr g = build_grid(6, 5, 3.0, 1);
  const ScalarField u = random_field(g, 11);
  const std::string text = solution_csv(u);
  CHECK(text.rfind("r,z,u\n", 0) == 0);
  const ScalarField back = parse_solution_csv(text, g);
  for (std::size_t n = 0; n < u.size(); ++n) CHECK(back.values()[n] == u.values()[n]);
  CHECK_THROWS_AS(parse_solution_csv(text, build_grid(6, 5, 4.0, 1)), Error);
  CHECK_THROWS_AS(parse_solution_csv("r,z,u\n0.25,0.1\n", g), Error);
}

TEST_CASE("atomic writes leave no temporary file") {
  const fs::path dir = scratch_dir("atomic");
  const fs::path target = dir / "a.txt";
  atomic_write(target, "first");
  atomic_write(target, "second");
  CHECK(slurp(target) == "second");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("commands") {
  CHECK(parse_command("certify") == Command::certify);
  CHECK_FALSE(parse_command("plot").has_value());
  CHECK(command_name(Command::ray) == "ray");

  RunConfig c = parse_config("[grid]\nn_r = 12\nn_z = 12\nr_max = 6\nz_len = 2\n[solver]\nseeds = 2\n");
  const fs::path dir = scratch_dir("commands");
  RunOptions opts;
  opts.out = dir.string();

  SUBCASE("ray through the zero field is rejected") {
    RunConfig z = c;
    z.init.kind = "zero";
    try {
      run(Command::ray, z, opts);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_argument);
      CHECK(contains(e.what(), "ray requires nonzero field"));
      const nlohmann::json j = error_json(e);
      CHECK(j["error"]["kind"] == "invalid_argument");
    }
  }
  SUBCASE("solve then ray reuse the written solution") {
    const RunResult s = run(Command::solve, c, opts);
    CHECK(s.exit_code == 0);
    CHECK(s.report["passed"] == true);
    CHECK(fs::exists(dir / "solution.csv"));
    CHECK(fs::exists(dir / "solve.json"));
    const RunResult r = run(Command::ray, c, opts);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "ray.csv");
    CHECK(csv.rfind("t,J\n", 0) == 0);
    for (const auto& entry : fs::directory_iterator(dir)) CHECK(entry.path().extension() != ".tmp");
  }
  fs::remove_all(dir);
}
