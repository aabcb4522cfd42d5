// SPDX-License-Identifier: Apache-2.0
#include "curlvar_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include <fmt/format.h>

#include "curlvar/error.hpp"
#include "curlvar/parallel.hpp"
#include "curlvar/refinement.hpp"
#include "curlvar_cli/io.hpp"
#include "curlvar_cli/report.hpp"

namespace curlvar::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::optional<Command> parse_command(std::string_view name) {
  if (name == "check") return Command::check;
  if (name == "solve") return Command::solve;
  if (name == "ray") return Command::ray;
  if (name == "reconstruct") return Command::reconstruct;
  if (name == "certify") return Command::certify;
  return std::nullopt;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::check: return "check";
    case Command::solve: return "solve";
    case Command::ray: return "ray";
    case Command::reconstruct: return "reconstruct";
    case Command::certify: return "certify";
  }
  return "unknown";
}

json error_json(const std::exception& e) {
  std::string kind = "internal";
  if (const auto* err = dynamic_cast<const Error*>(&e)) kind = std::string(to_string(err->kind()));
  return {{"error", {{"kind", kind}, {"message", e.what()}}}};
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  RunConfig config;
  fs::path out;
  GridPtr grid;
  RunResult result;

  void write(const std::string& name, const std::string& content) {
    const fs::path p = out / name;
    atomic_write(p, content);
    result.artifacts.push_back(p);
  }
};

Problem make_problem(const Context& ctx) {
  return Problem::create(ctx.grid, make_potential(ctx.config), make_nonlinearity(ctx.config));
}

ScalarField initial_field(const Context& ctx, const Problem& prob) {
  const InitConfig& init = ctx.config.init;
  ScalarField u(ctx.grid);
  if (init.kind == "bump") {
    u = default_bump(prob);
  } else if (init.kind == "random") {
    u = random_bump(ctx.grid, init.seed);
    u *= 1.0 / q_norm(prob, u);
  }
  if (init.z_shift != 0) u = shift_z(u, init.z_shift);
  return u;
}

SolveOptions solve_options(const Context& ctx) {
  SolveOptions o;
  o.max_iters = ctx.config.solver.max_iters;
  o.tol = ctx.config.solver.tol;
  o.armijo = ctx.config.solver.armijo;
  o.metric = ctx.config.solver.metric == "L2" ? Metric::L2 : Metric::Q;
  return o;
}

// input.solution, then <out>/solution.csv, then a fresh solve.
ScalarField obtain_solution(const Context& ctx, const Problem& prob, json& source) {
  if (!ctx.config.input.solution.empty()) {
    source = {{"kind", "input"}, {"path", ctx.config.input.solution}};
    return read_solution_csv(ctx.config.input.solution, ctx.grid);
  }
  const fs::path previous = ctx.out / "solution.csv";
  if (fs::exists(previous)) {
    source = {{"kind", "output"}, {"path", previous.string()}};
    return read_solution_csv(previous, ctx.grid);
  }
  SolveOptions o = solve_options(ctx);
  o.initial = initial_field(ctx, prob);
  SolveReport rep = minimize_on_nehari(prob, o);
  source = {{"kind", "solved"}, {"converged", rep.converged}, {"iterations", rep.iterations}};
  return std::move(rep.u);
}

void run_check(Context& ctx, json& res) {
  const OperatorPtr op = assemble_operator(make_potential(ctx.config), ctx.grid);
  const SpectralCertificate cert = min_eigenvalue(op, 1e-8);
  const auto samples = log_ladder(-6.0, 6.0, 4);
  const AssumptionReport assumptions = validate_assumptions(make_nonlinearity(ctx.config), *ctx.grid, samples);
  res["spectral"] = to_json(cert);
  res["spectral"]["lower_bound"] = op->lower_bound();
  res["assumptions"] = to_json(assumptions);
  if (ctx.config.potential.kind == "example") {
    res["potential_probe"] = {{"r", 1.0}, {"z", 0.0}, {"V", sign_changing_potential(1.0, 0.0)}};
  }
  ctx.result.exit_code = cert.passed && assumptions.all_passed() ? 0 : 1;
}

void run_solve(Context& ctx, json& res) {
  const Problem prob = make_problem(ctx);
  SolveOptions o = solve_options(ctx);
  o.initial = initial_field(ctx, prob);
  const SolveReport rep = minimize_on_nehari(prob, o);

  std::vector<ScalarField> starts;
  for (int k = 0; k < ctx.config.solver.seeds; ++k) {
    starts.push_back(random_bump(ctx.grid, ctx.config.init.seed * 1000003ULL + static_cast<std::uint64_t>(k)));
  }
  const double minimax = minimax_over_rays(prob, starts);
  const double q = prob.nonlinearity().q();
  const double coercive = (0.5 - 1.0 / q) * rep.q_norm * rep.q_norm;

  res["spectral"] = to_json(prob.certificate());
  res["solve"] = to_json(rep);
  res["minimax_upper_bound"] = minimax;
  const json gates = {{"converged", rep.converged},
                      {"nehari_identity", rep.nehari_residual <= 1e-9},
                      {"positive_level", rep.c_estimate > 0.0},
                      {"below_minimax", rep.c_estimate <= minimax + 1e-8},
                      {"coercivity", rep.c_estimate >= coercive - 1e-8}};
  res["gates"] = gates;
  bool ok = true;
  for (const auto& [k, v] : gates.items()) ok = ok && v.get<bool>();
  ctx.write("solution.csv", solution_csv(rep.u));
  ctx.result.exit_code = ok ? 0 : 1;
}

void run_ray(Context& ctx, json& res) {
  const Problem prob = make_problem(ctx);
  ScalarField u(ctx.grid);
  if (!ctx.config.input.solution.empty()) {
    u = read_solution_csv(ctx.config.input.solution, ctx.grid);
    res["source"] = {{"kind", "input"}, {"path", ctx.config.input.solution}};
  } else {
    u = initial_field(ctx, prob);
    res["source"] = {{"kind", "init"}, {"init", ctx.config.init.kind}};
  }
  if (u.is_zero()) throw Error(ErrorKind::invalid_argument, "ray requires nonzero field");
  const RayConfig& rc = ctx.config.ray;
  std::vector<double> t(static_cast<std::size_t>(rc.points));
  for (int k = 0; k < rc.points; ++k) {
    t[static_cast<std::size_t>(k)] = rc.t_lo * std::pow(rc.t_hi / rc.t_lo, static_cast<double>(k) / (rc.points - 1));
  }
  const std::vector<double> values = ray_profile(prob, u, t);
  const NehariRayResult ray = maximize_ray(prob, u);
  res["ray"] = to_json(ray);
  ctx.write("ray.csv", ray_csv(t, values));
  ctx.result.exit_code = 0;
}

void run_reconstruct(Context& ctx, json& res) {
  const Problem prob = make_problem(ctx);
  json source;
  const ScalarField u = obtain_solution(ctx, prob, source);
  const VectorField3 e = reconstruct_E(u, ctx.config.certify.n_theta);
  const ExtractedField back = extract_u(e);
  const ScalarField diff = back.u - u;
  res["source"] = source;
  res["reconstruct"] = {{"n_theta", ctx.config.certify.n_theta},
                        {"nodes", e.sampling().size()},
                        {"u_roundtrip_error", std::sqrt(std::max(0.0, inner_w(diff, diff)))},
                        {"form_residual", back.form_residual}};
  ctx.write("field3.csv", field3_csv(e));
  ctx.result.exit_code = 0;
}

void run_certify(Context& ctx, json& res) {
  const Problem prob = make_problem(ctx);
  json source;
  const ScalarField u = obtain_solution(ctx, prob, source);
  CertifyOptions co;
  co.n_theta = ctx.config.certify.n_theta;
  co.n_tests = ctx.config.certify.tests;
  co.seed = ctx.config.init.seed;
  co.pairing = ctx.config.certify.pairing == "central" ? GradientPairing::central : GradientPairing::staggered;
  res["source"] = source;

  const int levels = ctx.config.certify.refine;
  const RefinementStudy study = refinement_study(prob, u, levels, solve_options(ctx), co);
  const EquivalenceCertificate& cert = study.levels.front().certificate;
  res["certificate"] = to_json(cert);

  const double unorm = std::sqrt(std::max(0.0, inner_w(u, u)));
  json gates = {{"energy_gap", cert.relative_energy_gap <= kEnergyGapTol},
                {"weak_residual", cert.max_weak_mismatch <= kWeakMismatchTol},
                {"roundtrip", cert.u_roundtrip_error <= 1e-12 * (1.0 + unorm)}};
  if (levels > 0) {
    res["refinement"] = to_json(study);
    std::vector<double> gap;
    std::vector<double> div;
    std::vector<double> curl_id;
    std::vector<double> scale;
    bool decreasing = true;
    for (const auto& l : study.levels) {
      gap.push_back(l.certificate.energy_gap);
      div.push_back(l.certificate.div_norm);
      curl_id.push_back(l.certificate.curl_identity_gap);
      scale.push_back(std::sqrt(l.certificate.curl_energy));
      if (gap.size() > 1 && !(gap.back() < gap[gap.size() - 2])) decreasing = false;
    }
    const OrderCheck div_order = check_order(div, scale, kMinOrder);
    const OrderCheck curl_order = check_order(curl_id, scale, kMinOrder, 0.0);
    res["refinement"]["div_order"] = {{"passed", div_order.passed}, {"at_roundoff", div_order.at_roundoff},
                                      {"min_order", div_order.min_order}};
    res["refinement"]["curl_identity_order"] = {{"passed", curl_order.passed}, {"min_order", curl_order.min_order}};
    gates["energy_gap_decreasing"] = decreasing;
    gates["div_order"] = div_order.passed;
    gates["curl_identity_order"] = curl_order.passed;
  }
  res["gates"] = gates;
  bool ok = true;
  for (const auto& [k, v] : gates.items()) ok = ok && v.get<bool>();
  ctx.result.exit_code = ok ? 0 : 1;
}

}  // namespace

RunResult run(Command command, RunConfig config, const RunOptions& options) {
  if (options.out) config.output.dir = *options.out;
  if (options.seed) config.init.seed = *options.seed;
  if (options.refine) {
    if (*options.refine < 0 || *options.refine > 3) throw Error(ErrorKind::config, "--refine must lie in 0..3");
    config.certify.refine = *options.refine;
  }

  Context ctx{config, fs::path(config.output.dir), make_grid(config), {}};
  json res;
  switch (command) {
    case Command::check: run_check(ctx, res); break;
    case Command::solve: run_solve(ctx, res); break;
    case Command::ray: run_ray(ctx, res); break;
    case Command::reconstruct: run_reconstruct(ctx, res); break;
    case Command::certify: run_certify(ctx, res); break;
  }

  json report;
  report["command"] = command_name(command);
  report["metadata"] = {{"timestamp", utc_timestamp()}, {"version", CURLVAR_VERSION}, {"threads", thread_count()}};
  report["config"] = config_to_json(config);
  report["result"] = res;
  report["passed"] = ctx.result.exit_code == 0;
  ctx.write(std::string(command_name(command)) + ".json", report.dump(2) + "\n");
  ctx.result.report = std::move(report);
  return ctx.result;
}

}  // namespace curlvar::cli
