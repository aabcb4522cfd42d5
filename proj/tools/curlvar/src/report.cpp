// SPDX-License-Identifier: Apache-2.0
#include "curlvar_cli/report.hpp"

namespace curlvar::cli {

using nlohmann::json;

json to_json(const SpectralCertificate& c) {
  return {{"lambda_min", c.lambda_min}, {"residual", c.residual}, {"iterations", c.iterations},
          {"passed", c.passed},         {"margin", c.margin},     {"shift", c.shift},
          {"reason", c.reason}};
}

json to_json(const AssumptionReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"name", e.name},
                       {"passed", e.passed},
                       {"skipped", e.skipped},
                       {"evidence_only", e.evidence_only},
                       {"worst_violation", e.worst_violation},
                       {"witness", {{"r", e.witness_x.r}, {"z", e.witness_x.z}, {"u", e.witness_u}}},
                       {"note", e.note}});
  }
  return {{"all_passed", r.all_passed()}, {"entries", entries}};
}

json to_json(const NehariRayResult& r) {
  json samples = json::array();
  for (const auto& s : r.phi_prime_samples) samples.push_back({{"t", s.t}, {"sign", s.sign}});
  return {{"t_min", r.t_min},       {"t_max", r.t_max},
          {"t_star", r.t_star()},   {"value", r.value},
          {"plateau", r.plateau},   {"plateau_flat", r.plateau_flat},
          {"slope_signs", samples}};
}

json to_json(const DiagnosticsReport& d) {
  return {{"nehari_residual", d.nehari_residual},
          {"J1", {{"radius", d.j1.radius}, {"min_energy", d.j1.min_energy}, {"samples", d.j1.samples}, {"passed", d.j1.passed}}},
          {"J2", {{"t", d.j2.t}, {"ratio", d.j2.ratio}, {"monotone", d.j2.monotone}, {"passed", d.j2.passed}}},
          {"J3", {{"t", d.j3.t}, {"phi", d.j3.phi}, {"max_phi", d.j3.max_phi}, {"argmax_t", d.j3.argmax_t}, {"passed", d.j3.passed}}}};
}

json to_json(const SolveReport& r) {
  return {{"converged", r.converged},
          {"message", r.message},
          {"iterations", r.iterations},
          {"c_estimate", r.c_estimate},
          {"cerami_residual", r.cerami_residual},
          {"nehari_residual", r.nehari_residual},
          {"q_norm", r.q_norm},
          {"energy_history", r.energy_history},
          {"residual_history", r.residual_history},
          {"step_history", r.step_history}};
}

json to_json(const EquivalenceCertificate& c) {
  json weak = json::array();
  for (const auto& w : c.weak) {
    weak.push_back({{"maxwell", w.maxwell}, {"schrodinger", w.schrodinger}, {"mismatch", w.mismatch}});
  }
  return {{"energy_J", c.energy_J},
          {"energy_E", c.energy_E},
          {"energy_gap", c.energy_gap},
          {"relative_energy_gap", c.relative_energy_gap},
          {"curl_energy", c.curl_energy},
          {"div_norm", c.div_norm},
          {"curl_identity_gap", c.curl_identity_gap},
          {"curl_grad_gap", c.curl_grad_gap},
          {"u_roundtrip_error", c.u_roundtrip_error},
          {"form_residual", c.form_residual},
          {"weak", weak},
          {"max_weak_mismatch", c.max_weak_mismatch}};
}

json to_json(const RefinementStudy& s) {
  json levels = json::array();
  for (const auto& l : s.levels) {
    levels.push_back({{"n_r", l.n_r},
                      {"n_z", l.n_z},
                      {"c_estimate", l.c_estimate},
                      {"cerami_residual", l.cerami_residual},
                      {"nehari_residual", l.nehari_residual},
                      {"iterations", l.iterations},
                      {"converged", l.converged},
                      {"certificate", to_json(l.certificate)}});
  }
  return {{"levels", levels},
          {"energy_gap_slopes", s.energy_gap_slopes},
          {"div_slopes", s.div_slopes},
          {"curl_identity_slopes", s.curl_identity_slopes},
          {"curl_grad_slopes", s.curl_grad_slopes}};
}

}  // namespace curlvar::cli
