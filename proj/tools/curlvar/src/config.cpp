// SPDX-License-Identifier: Apache-2.0
#include "curlvar_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "curlvar/error.hpp"

namespace curlvar::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::config, msg); }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Value {
  std::string text;
  std::string where;  // "line N, key [section] name"
};

double to_double(const Value& v) {
  double out = 0.0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(out)) {
    fail(fmt::format("{}: expected a number, got '{}'", v.where, v.text));
  }
  return out;
}

long long to_integer(const Value& v) {
  long long out = 0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) {
    fail(fmt::format("{}: expected an integer, got '{}'", v.where, v.text));
  }
  return out;
}

int to_int(const Value& v) {
  const long long x = to_integer(v);
  if (x < -1000000000LL || x > 1000000000LL) fail(fmt::format("{}: value out of range", v.where));
  return static_cast<int>(x);
}

std::string to_choice(const Value& v, std::initializer_list<const char*> choices) {
  std::string allowed;
  for (const char* c : choices) {
    if (v.text == c) return v.text;
    allowed += allowed.empty() ? c : std::string(", ") + c;
  }
  fail(fmt::format("{}: expected one of {{{}}}, got '{}'", v.where, allowed, v.text));
}

using Setter = std::function<void(RunConfig&, const Value&)>;

const std::map<std::string, std::map<std::string, Setter>>& key_table() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"grid",
       {{"n_r", [](RunConfig& c, const Value& v) { c.grid.n_r = to_int(v); }},
        {"n_z", [](RunConfig& c, const Value& v) { c.grid.n_z = to_int(v); }},
        {"r_max", [](RunConfig& c, const Value& v) { c.grid.r_max = to_double(v); }},
        {"z_len",
         [](RunConfig& c, const Value& v) {
           const double z = to_double(v);
           if (!(z > 0.0) || z != std::floor(z) || z > 1e6) {
             fail(fmt::format("{}: z_len must be a positive integer because the potential is "
                              "1-periodic in z, got {}",
                              v.where, v.text));
           }
           c.grid.z_len = static_cast<int>(z);
         }}}},
      {"potential",
       {{"kind",
         [](RunConfig& c, const Value& v) { c.potential.kind = to_choice(v, {"constant", "example"}); }},
        {"value", [](RunConfig& c, const Value& v) { c.potential.value = to_double(v); }}}},
      {"f",
       {{"p", [](RunConfig& c, const Value& v) { c.nonlinearity.p = to_double(v); }},
        {"q", [](RunConfig& c, const Value& v) { c.nonlinearity.q = to_double(v); }}}},
      {"g",
       {{"kind", [](RunConfig& c, const Value& v) { c.nonlinearity.g_kind = to_choice(v, {"zero", "power"}); }},
        {"q", [](RunConfig& c, const Value& v) { c.nonlinearity.g_q = to_double(v); }},
        {"gamma", [](RunConfig& c, const Value& v) { c.nonlinearity.gamma = to_double(v); }}}},
      {"solver",
       {{"tol", [](RunConfig& c, const Value& v) { c.solver.tol = to_double(v); }},
        {"max_iters", [](RunConfig& c, const Value& v) { c.solver.max_iters = to_int(v); }},
        {"metric", [](RunConfig& c, const Value& v) { c.solver.metric = to_choice(v, {"Q", "L2"}); }},
        {"armijo", [](RunConfig& c, const Value& v) { c.solver.armijo = to_double(v); }},
        {"seeds", [](RunConfig& c, const Value& v) { c.solver.seeds = to_int(v); }}}},
      {"init",
       {{"kind", [](RunConfig& c, const Value& v) { c.init.kind = to_choice(v, {"bump", "random", "zero"}); }},
        {"seed",
         [](RunConfig& c, const Value& v) {
           const long long s = to_integer(v);
           if (s < 0) fail(fmt::format("{}: seed must be non-negative", v.where));
           c.init.seed = static_cast<std::uint64_t>(s);
         }},
        {"z_shift", [](RunConfig& c, const Value& v) { c.init.z_shift = to_int(v); }}}},
      {"ray",
       {{"t_lo", [](RunConfig& c, const Value& v) { c.ray.t_lo = to_double(v); }},
        {"t_hi", [](RunConfig& c, const Value& v) { c.ray.t_hi = to_double(v); }},
        {"points", [](RunConfig& c, const Value& v) { c.ray.points = to_int(v); }}}},
      {"certify",
       {{"n_theta", [](RunConfig& c, const Value& v) { c.certify.n_theta = to_int(v); }},
        {"tests", [](RunConfig& c, const Value& v) { c.certify.tests = to_int(v); }},
        {"refine", [](RunConfig& c, const Value& v) { c.certify.refine = to_int(v); }},
        {"pairing",
         [](RunConfig& c, const Value& v) { c.certify.pairing = to_choice(v, {"staggered", "central"}); }}}},
      {"output", {{"dir", [](RunConfig& c, const Value& v) { c.output.dir = v.text; }}}},
      {"input", {{"solution", [](RunConfig& c, const Value& v) { c.input.solution = v.text; }}}},
  };
  return table;
}

void validate(const RunConfig& c) {
  if (c.grid.n_r < 4 || c.grid.n_z < 4) fail("grid: n_r and n_z must be at least 4");
  if (!(c.grid.r_max > 0.0)) fail("grid: r_max must be positive");

  const auto& nl = c.nonlinearity;
  if (!(nl.p > 2.0 && nl.p < 6.0)) fail(fmt::format("(F1): 2 < p < 6 violated (f.p = {})", nl.p));
  if (nl.g_kind == "power") {
    if (!(nl.g_q > 2.0 && nl.g_q < nl.p)) {
      fail(fmt::format("(G1): 2 < q < p violated (g.q = {}, f.p = {})", nl.g_q, nl.p));
    }
    if (!(nl.gamma > 0.0)) {
      fail(fmt::format("(G1): Gamma must be positive (g.gamma = {}); use g.kind = zero for no "
                       "defocusing term",
                       nl.gamma));
    }
    if (nl.q && *nl.q != nl.g_q) fail("f.q must equal g.q when g is a power");
  }
  if (nl.q && !(*nl.q > 2.0 && *nl.q < nl.p)) {
    fail(fmt::format("(G1): 2 < q < p violated (f.q = {}, f.p = {})", *nl.q, nl.p));
  }

  if (!(c.solver.tol > 0.0)) fail("solver: tol must be positive");
  if (c.solver.max_iters < 0) fail("solver: max_iters must be non-negative");
  if (!(c.solver.armijo > 0.0 && c.solver.armijo < 0.5)) fail("solver: armijo must lie in (0, 0.5)");
  if (c.solver.seeds < 1) fail("solver: seeds must be at least 1");
  if (!(c.ray.t_lo > 0.0 && c.ray.t_hi > c.ray.t_lo)) fail("ray: need 0 < t_lo < t_hi");
  if (c.ray.points < 2) fail("ray: points must be at least 2");
  if (c.certify.n_theta < 8 || c.certify.n_theta % 2 != 0) fail("certify: n_theta must be even and >= 8");
  if (c.certify.tests < 0) fail("certify: tests must be non-negative");
  if (c.certify.refine < 0 || c.certify.refine > 3) fail("certify: refine must lie in 0..3");
  if (c.output.dir.empty()) fail("output: dir must not be empty");
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  const auto& table = key_table();
  std::string section;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(fmt::format("line {}: malformed section header '{}'", line_no, line));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!table.contains(section)) fail(fmt::format("line {}: unknown section [{}]", line_no, section));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
    }
    std::string key(trim(line.substr(0, eq)));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    std::string sec = section;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      sec = key.substr(0, dot);
      key = key.substr(dot + 1);
      if (!table.contains(sec)) fail(fmt::format("line {}: unknown section [{}] in key '{}.{}'", line_no, sec, sec, key));
    }
    if (sec.empty()) fail(fmt::format("line {}: key '{}' outside any section", line_no, key));
    const auto& keys = table.at(sec);
    const auto it = keys.find(key);
    if (it == keys.end()) fail(fmt::format("line {}: unknown key '{}' in section [{}]", line_no, key, sec));
    if (value.empty()) fail(fmt::format("line {}: key '{}' in section [{}] has no value", line_no, key, sec));
    if (!seen.insert(sec + "." + key).second) {
      fail(fmt::format("line {}: duplicate key '{}' in section [{}]", line_no, key, sec));
    }
    it->second(cfg, Value{value, fmt::format("line {}, key '{}' in section [{}]", line_no, key, sec)});
  }
  validate(cfg);
  if (!cfg.nonlinearity.q) {
    cfg.nonlinearity.q = cfg.nonlinearity.g_kind == "power" ? cfg.nonlinearity.g_q
                                                           : 0.5 * (2.0 + cfg.nonlinearity.p);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const RunConfig& c) {
  const auto& nl = c.nonlinearity;
  std::string out;
  out += fmt::format("[grid]\nn_r = {}\nn_z = {}\nr_max = {:.17g}\nz_len = {}\n\n", c.grid.n_r,
                     c.grid.n_z, c.grid.r_max, c.grid.z_len);
  out += fmt::format("[potential]\nkind = {}\nvalue = {:.17g}\n\n", c.potential.kind, c.potential.value);
  out += fmt::format("[f]\np = {:.17g}\n", nl.p);
  if (nl.q) out += fmt::format("q = {:.17g}\n", *nl.q);
  out += fmt::format("\n[g]\nkind = {}\nq = {:.17g}\ngamma = {:.17g}\n\n", nl.g_kind, nl.g_q, nl.gamma);
  out += fmt::format("[solver]\ntol = {:.17g}\nmax_iters = {}\nmetric = {}\narmijo = {:.17g}\nseeds = {}\n\n",
                     c.solver.tol, c.solver.max_iters, c.solver.metric, c.solver.armijo, c.solver.seeds);
  out += fmt::format("[init]\nkind = {}\nseed = {}\nz_shift = {}\n\n", c.init.kind, c.init.seed, c.init.z_shift);
  out += fmt::format("[ray]\nt_lo = {:.17g}\nt_hi = {:.17g}\npoints = {}\n\n", c.ray.t_lo, c.ray.t_hi, c.ray.points);
  out += fmt::format("[certify]\nn_theta = {}\ntests = {}\nrefine = {}\npairing = {}\n\n", c.certify.n_theta,
                     c.certify.tests, c.certify.refine, c.certify.pairing);
  out += fmt::format("[output]\ndir = \"{}\"\n", c.output.dir);
  if (!c.input.solution.empty()) out += fmt::format("\n[input]\nsolution = \"{}\"\n", c.input.solution);
  return out;
}

nlohmann::json config_to_json(const RunConfig& c) {
  const auto& nl = c.nonlinearity;
  nlohmann::json j;
  j["grid"] = {{"n_r", c.grid.n_r}, {"n_z", c.grid.n_z}, {"r_max", c.grid.r_max}, {"z_len", c.grid.z_len}};
  j["potential"] = {{"kind", c.potential.kind}, {"value", c.potential.value}};
  j["f"] = {{"p", nl.p}, {"q", nl.q ? nlohmann::json(*nl.q) : nlohmann::json()}};
  j["g"] = {{"kind", nl.g_kind}, {"q", nl.g_q}, {"gamma", nl.gamma}};
  j["solver"] = {{"tol", c.solver.tol},
                 {"max_iters", c.solver.max_iters},
                 {"metric", c.solver.metric},
                 {"armijo", c.solver.armijo},
                 {"seeds", c.solver.seeds}};
  j["init"] = {{"kind", c.init.kind}, {"seed", c.init.seed}, {"z_shift", c.init.z_shift}};
  j["ray"] = {{"t_lo", c.ray.t_lo}, {"t_hi", c.ray.t_hi}, {"points", c.ray.points}};
  j["certify"] = {{"n_theta", c.certify.n_theta},
                  {"tests", c.certify.tests},
                  {"refine", c.certify.refine},
                  {"pairing", c.certify.pairing}};
  j["output"] = {{"dir", c.output.dir}};
  j["input"] = {{"solution", c.input.solution}};
  return j;
}

GridPtr make_grid(const RunConfig& c) {
  return build_grid(c.grid.n_r, c.grid.n_z, c.grid.r_max, c.grid.z_len);
}

PotentialSpec make_potential(const RunConfig& c) {
  if (c.potential.kind == "example") return PotentialSpec::sign_changing();
  return PotentialSpec::constant(c.potential.value);
}

NonlinearitySpec make_nonlinearity(const RunConfig& c) {
  const auto& nl = c.nonlinearity;
  if (nl.g_kind == "power") return NonlinearitySpec::competing_powers(nl.p, nl.g_q, Coefficient::constant(nl.gamma));
  return NonlinearitySpec::pure_power(nl.p, nl.q);
}

}  // namespace curlvar::cli
