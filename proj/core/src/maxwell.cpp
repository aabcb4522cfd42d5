// SPDX-License-Identifier: Apache-2.0
#include "curlvar/maxwell.hpp"

#include <cmath>
#include <numbers>

#include "curlvar/error.hpp"
#include "curlvar/solver.hpp"

namespace curlvar {

CylinderSampling::CylinderSampling(GridPtr grid, int n_theta)
    : grid_(std::move(grid)), n_theta_(n_theta) {
  if (!grid_) throw Error(ErrorKind::invalid_argument, "sampling needs a grid");
  if (n_theta < 4 || n_theta % 2 != 0) {
    throw Error(ErrorKind::invalid_argument, "n_theta must be even and at least 4");
  }
  dtheta_ = 2.0 * std::numbers::pi / n_theta;
  const auto n = static_cast<std::size_t>(n_theta);
  cos_.resize(n);
  sin_.resize(n);
  for (int k = 0; k < n_theta; ++k) {
    cos_[static_cast<std::size_t>(k)] = std::cos(k * dtheta_);
    sin_[static_cast<std::size_t>(k)] = std::sin(k * dtheta_);
  }
  dtheta_matrix_.assign(n * n, 0.0);
  for (int k = 0; k < n_theta; ++k) {
    for (int l = 0; l < n_theta; ++l) {
      if (k == l) continue;
      const int d = k - l;
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      dtheta_matrix_[static_cast<std::size_t>(k) * n + static_cast<std::size_t>(l)] =
          0.5 * sign / std::tan(0.5 * d * dtheta_);
    }
  }
}

SamplingPtr make_sampling(GridPtr grid, int n_theta) {
  return std::make_shared<const CylinderSampling>(std::move(grid), n_theta);
}

VectorField3::VectorField3(SamplingPtr sampling) : sampling_(std::move(sampling)) {
  for (auto& c : c_) c.assign(sampling_->size(), 0.0);
}

VectorField3 VectorField3::from_function(SamplingPtr sampling, const Fn& fn) {
  VectorField3 e(std::move(sampling));
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  for (int i = 0; i < g.n_r(); ++i) {
    for (int k = 0; k < s.n_theta(); ++k) {
      for (int j = 0; j < g.n_z(); ++j) {
        e.set(s.index(i, k, j), fn(g.r(i) * s.cos_theta(k), g.r(i) * s.sin_theta(k), g.z(j)));
      }
    }
  }
  return e;
}

bool VectorField3::is_finite() const noexcept {
  for (const auto& c : c_) {
    for (double v : c) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

namespace {

void require_same(const VectorField3& a, const VectorField3& b) {
  if (!(a.sampling() == b.sampling())) {
    throw Error(ErrorKind::invalid_argument, "vector fields live on different samplings");
  }
}

void require_grid(const Problem& prob, const VectorField3& e) {
  if (!(e.sampling().grid() == prob.grid())) {
    throw Error(ErrorKind::invalid_argument, "vector field and problem live on different grids");
  }
}

VectorField3 combine(const VectorField3& a, const VectorField3& b, double sb) {
  require_same(a, b);
  VectorField3 out = a;
  for (int c = 0; c < 3; ++c) {
    auto& o = out.component(c);
    const auto& y = b.component(c);
    for (std::size_t n = 0; n < o.size(); ++n) o[n] += sb * y[n];
  }
  return out;
}

VectorField3 reconstruct_unchecked(const ScalarField& u, SamplingPtr sampling) {
  VectorField3 e(std::move(sampling));
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  for (int i = 0; i < g.n_r(); ++i) {
    for (int k = 0; k < s.n_theta(); ++k) {
      for (int j = 0; j < g.n_z(); ++j) {
        const double v = u(i, j);
        e.set(s.index(i, k, j), {-v * s.sin_theta(k), v * s.cos_theta(k), 0.0});
      }
    }
  }
  return e;
}

// grad[a][b] = d_b E_a, b over (x, y, z).
using Gradient = std::array<std::array<double, 3>, 3>;

// Calls visit(i, k, j, n, grad) for every node with the stencils of vector_calculus.
template <class Visit>
void for_each_gradient(const VectorField3& e, Visit visit) {
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  const int nt = s.n_theta();
  const int half = nt / 2;
  const auto& dmat = s.theta_derivative();
  const double inv2dr = 0.5 / g.dr();
  const double inv2dz = 0.5 / g.dz();
  std::array<std::vector<double>, 3> dth;
  for (auto& d : dth) d.resize(static_cast<std::size_t>(nt));

  for (int i = 0; i < g.n_r(); ++i) {
    const double r = g.r(i);
    for (int j = 0; j < g.n_z(); ++j) {
      for (int a = 0; a < 3; ++a) {
        const auto& c = e.component(a);
        for (int k = 0; k < nt; ++k) {
          double acc = 0.0;
          const double* row = dmat.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(nt);
          for (int l = 0; l < nt; ++l) acc += row[l] * c[s.index(i, l, j)];
          dth[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = acc;
        }
      }
      const int jp = g.wrap_z(j + 1);
      const int jm = g.wrap_z(j - 1);
      for (int k = 0; k < nt; ++k) {
        const std::size_t n = s.index(i, k, j);
        const double ct = s.cos_theta(k);
        const double st = s.sin_theta(k);
        Gradient grad;
        for (int a = 0; a < 3; ++a) {
          const auto& c = e.component(a);
          double dr;
          if (i == 0) {
            dr = (c[s.index(1, k, j)] - c[s.index(0, (k + half) % nt, j)]) * inv2dr;
          } else if (i == g.n_r() - 1) {
            dr = (3.0 * c[n] - 4.0 * c[s.index(i - 1, k, j)] + c[s.index(i - 2, k, j)]) * inv2dr;
          } else {
            dr = (c[s.index(i + 1, k, j)] - c[s.index(i - 1, k, j)]) * inv2dr;
          }
          const double dt = dth[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
          const double dz = (c[s.index(i, k, jp)] - c[s.index(i, k, jm)]) * inv2dz;
          grad[static_cast<std::size_t>(a)] = {ct * dr - st / r * dt, st * dr + ct / r * dt, dz};
        }
        visit(i, k, j, n, grad);
      }
    }
  }
}

double divergence(const Gradient& g) { return g[0][0] + g[1][1] + g[2][2]; }

std::array<double, 3> curl(const Gradient& g) {
  return {g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]};
}

// Sum over nodes of weight(i) * term(i, k, j, n), compensated per radial row.
template <class Term>
double volume_sum(const CylinderSampling& s, Term term) {
  const Grid& g = s.grid();
  CompensatedSum total;
  for (int i = 0; i < g.n_r(); ++i) {
    CompensatedSum row;
    for (int k = 0; k < s.n_theta(); ++k) {
      for (int j = 0; j < g.n_z(); ++j) row.add(term(i, k, j, s.index(i, k, j)));
    }
    total.add(s.weight(i) * row.value());
  }
  return total.value();
}

// 1/2 int V |E|^2 - int F~(x, |E|)
double potential_and_nonlinear(const Problem& prob, const VectorField3& e) {
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  const auto vpot = prob.op().potential_values();
  return volume_sum(s, [&](int i, int, int j, std::size_t n) {
    const auto v = e.at(n);
    const double m2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    const std::size_t node = g.index(i, j);
    return 0.5 * vpot[node] * m2 - prob.F_tilde(node, i, j, std::sqrt(m2));
  });
}

}  // namespace

VectorField3 operator+(const VectorField3& a, const VectorField3& b) { return combine(a, b, 1.0); }
VectorField3 operator-(const VectorField3& a, const VectorField3& b) { return combine(a, b, -1.0); }

VectorField3 operator*(double s, const VectorField3& a) {
  VectorField3 out = a;
  for (int c = 0; c < 3; ++c) {
    for (double& v : out.component(c)) v *= s;
  }
  return out;
}

double norm_sq(const VectorField3& e) {
  return volume_sum(e.sampling(), [&](int, int, int, std::size_t n) {
    const auto v = e.at(n);
    return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  });
}

double max_abs_diff(const VectorField3& a, const VectorField3& b) {
  require_same(a, b);
  double m = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto& x = a.component(c);
    const auto& y = b.component(c);
    for (std::size_t n = 0; n < x.size(); ++n) m = std::max(m, std::abs(x[n] - y[n]));
  }
  return m;
}

VectorField3 reconstruct_E(const ScalarField& u, int n_theta) {
  if (n_theta < 8) throw Error(ErrorKind::invalid_argument, "reconstruct_E needs n_theta >= 8");
  return reconstruct_unchecked(u, make_sampling(u.grid_ptr(), n_theta));
}

ExtractedField extract_u(const VectorField3& e) {
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  ExtractedField out{ScalarField(s.grid_ptr()), 0.0};
  for (int i = 0; i < g.n_r(); ++i) {
    for (int j = 0; j < g.n_z(); ++j) {
      CompensatedSum acc;
      for (int k = 0; k < s.n_theta(); ++k) {
        const auto v = e.at(s.index(i, k, j));
        acc.add(-s.sin_theta(k) * v[0] + s.cos_theta(k) * v[1]);
      }
      out.u(i, j) = acc.value() / s.n_theta();
    }
  }
  const double total = norm_sq(e);
  if (total > 0.0) {
    out.form_residual = norm_sq(e - reconstruct_unchecked(out.u, e.sampling_ptr())) / total;
  }
  return out;
}

ComponentProjections project_components(const VectorField3& e) {
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  ComponentProjections p{VectorField3(e.sampling_ptr()), VectorField3(e.sampling_ptr()),
                         VectorField3(e.sampling_ptr())};
  for (int i = 0; i < g.n_r(); ++i) {
    for (int k = 0; k < s.n_theta(); ++k) {
      const double c = s.cos_theta(k);
      const double sn = s.sin_theta(k);
      for (int j = 0; j < g.n_z(); ++j) {
        const std::size_t n = s.index(i, k, j);
        const auto v = e.at(n);
        const double er = c * v[0] + sn * v[1];
        const double et = -sn * v[0] + c * v[1];
        p.rho.set(n, {er * c, er * sn, 0.0});
        p.tau.set(n, {-et * sn, et * c, 0.0});
        p.zeta.set(n, {0.0, 0.0, v[2]});
      }
    }
  }
  return p;
}

VectorField3 symmetrize_SO(const VectorField3& e, int n_angles) {
  if (n_angles < 4) throw Error(ErrorKind::invalid_argument, "symmetrize_SO needs n_angles >= 4");
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  const int nt = s.n_theta();
  const auto ntu = static_cast<std::size_t>(nt);
  VectorField3 out(e.sampling_ptr());
  std::vector<double> kernel(ntu);
  std::array<std::vector<double>, 3> shifted;
  for (auto& v : shifted) v.resize(ntu);

  for (int m = 0; m < n_angles; ++m) {
    const double beta = 2.0 * std::numbers::pi * m / n_angles;
    const double cb = std::cos(beta);
    const double sb = std::sin(beta);
    // beta is a whole number of sampling steps exactly when m * nt is divisible by n_angles
    const bool aligned = (static_cast<long long>(m) * nt) % n_angles == 0;
    const int step = aligned ? static_cast<int>((static_cast<long long>(m) * nt) / n_angles) : 0;
    if (!aligned) {
      // kernel[d] interpolates the value at theta_l + d * dtheta + beta from sample l
      for (int d = 0; d < nt; ++d) {
        const double x = d * s.dtheta() + beta;
        double acc = 1.0 + std::cos(0.5 * nt * x);
        for (int q = 1; q < nt / 2; ++q) acc += 2.0 * std::cos(q * x);
        kernel[static_cast<std::size_t>(d)] = acc / nt;
      }
    }
    for (int i = 0; i < g.n_r(); ++i) {
      for (int j = 0; j < g.n_z(); ++j) {
        for (int a = 0; a < 3; ++a) {
          const auto& c = e.component(a);
          auto& sh = shifted[static_cast<std::size_t>(a)];
          for (int k = 0; k < nt; ++k) {
            if (aligned) {
              sh[static_cast<std::size_t>(k)] = c[s.index(i, (k + step) % nt, j)];
            } else {
              double acc = 0.0;
              for (int l = 0; l < nt; ++l) {
                acc += kernel[static_cast<std::size_t>(((k - l) % nt + nt) % nt)] * c[s.index(i, l, j)];
              }
              sh[static_cast<std::size_t>(k)] = acc;
            }
          }
        }
        for (int k = 0; k < nt; ++k) {
          const auto ku = static_cast<std::size_t>(k);
          const std::size_t n = s.index(i, k, j);
          out.component(0)[n] += cb * shifted[0][ku] + sb * shifted[1][ku];
          out.component(1)[n] += -sb * shifted[0][ku] + cb * shifted[1][ku];
          out.component(2)[n] += shifted[2][ku];
        }
      }
    }
  }
  return (1.0 / n_angles) * out;
}

VectorCalculus vector_calculus(const VectorField3& e) {
  VectorCalculus out{ScalarField3{e.sampling_ptr(), std::vector<double>(e.sampling().size(), 0.0)},
                     VectorField3(e.sampling_ptr())};
  for_each_gradient(e, [&](int, int, int, std::size_t n, const Gradient& grad) {
    out.div.values[n] = divergence(grad);
    out.curl.set(n, curl(grad));
  });
  return out;
}

DerivativeIntegrals derivative_integrals(const VectorField3& e) {
  const CylinderSampling& s = e.sampling();
  const int nr = s.grid().n_r();
  std::vector<CompensatedSum> curl_rows(static_cast<std::size_t>(nr));
  std::vector<CompensatedSum> div_rows(static_cast<std::size_t>(nr));
  std::vector<CompensatedSum> grad_rows(static_cast<std::size_t>(nr));
  for_each_gradient(e, [&](int i, int, int, std::size_t, const Gradient& grad) {
    const auto iu = static_cast<std::size_t>(i);
    const auto c = curl(grad);
    const double d = divergence(grad);
    double gsq = 0.0;
    for (const auto& row : grad) {
      for (double v : row) gsq += v * v;
    }
    curl_rows[iu].add(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    div_rows[iu].add(d * d);
    grad_rows[iu].add(gsq);
  });
  CompensatedSum cs;
  CompensatedSum ds;
  CompensatedSum gs;
  for (int i = 0; i < nr; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    cs.add(s.weight(i) * curl_rows[iu].value());
    ds.add(s.weight(i) * div_rows[iu].value());
    gs.add(s.weight(i) * grad_rows[iu].value());
  }
  return {cs.value(), ds.value(), gs.value()};
}

double energy_E(const Problem& prob, const VectorField3& e) {
  require_grid(prob, e);
  const double value = 0.5 * derivative_integrals(e).curl_sq + potential_and_nonlinear(prob, e);
  if (!std::isfinite(value)) throw Error(ErrorKind::non_finite, "Maxwell energy is not finite");
  return value;
}

double maxwell_weak_residual(const Problem& prob, const VectorField3& e, const VectorField3& w,
                             GradientPairing pairing) {
  require_grid(prob, e);
  require_same(e, w);
  const CylinderSampling& s = e.sampling();
  const Grid& g = s.grid();
  const int nt = s.n_theta();
  const auto vpot = prob.op().potential_values();

  double stiffness = 0.0;
  if (pairing == GradientPairing::central) {
    std::vector<Gradient> ge(s.size());
    for_each_gradient(e, [&](int, int, int, std::size_t n, const Gradient& grad) { ge[n] = grad; });
    std::vector<CompensatedSum> rows(static_cast<std::size_t>(g.n_r()));
    for_each_gradient(w, [&](int i, int, int, std::size_t n, const Gradient& grad) {
      double acc = 0.0;
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) acc += ge[n][a][b] * grad[a][b];
      }
      rows[static_cast<std::size_t>(i)].add(acc);
    });
    CompensatedSum total;
    for (int i = 0; i < g.n_r(); ++i) total.add(s.weight(i) * rows[static_cast<std::size_t>(i)].value());
    stiffness = total.value();
  } else {
    const auto& dmat = s.theta_derivative();
    const double dr = g.dr();
    const double dz = g.dz();
    const double cell = s.dtheta() * dz;
    std::vector<double> de(static_cast<std::size_t>(nt));
    std::vector<double> dw(static_cast<std::size_t>(nt));
    CompensatedSum total;
    for (int i = 0; i < g.n_r(); ++i) {
      const double r = g.r(i);
      const double face_r = (i + 1) * dr;  // outer face of cell i; the axis face has no area
      CompensatedSum radial;
      CompensatedSum axial;
      CompensatedSum angular;
      for (int a = 0; a < 3; ++a) {
        const auto& ce = e.component(a);
        const auto& cw = w.component(a);
        for (int j = 0; j < g.n_z(); ++j) {
          const int jp = g.wrap_z(j + 1);
          for (int k = 0; k < nt; ++k) {
            const std::size_t n = s.index(i, k, j);
            const double eo = i + 1 < g.n_r() ? ce[s.index(i + 1, k, j)] : 0.0;
            const double wo = i + 1 < g.n_r() ? cw[s.index(i + 1, k, j)] : 0.0;
            radial.add((eo - ce[n]) * (wo - cw[n]));
            axial.add((ce[s.index(i, k, jp)] - ce[n]) * (cw[s.index(i, k, jp)] - cw[n]));
          }
          for (int k = 0; k < nt; ++k) {
            double ae = 0.0;
            double aw = 0.0;
            const double* row = dmat.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(nt);
            for (int l = 0; l < nt; ++l) {
              ae += row[l] * ce[s.index(i, l, j)];
              aw += row[l] * cw[s.index(i, l, j)];
            }
            de[static_cast<std::size_t>(k)] = ae;
            dw[static_cast<std::size_t>(k)] = aw;
          }
          for (int k = 0; k < nt; ++k) {
            angular.add(de[static_cast<std::size_t>(k)] * dw[static_cast<std::size_t>(k)]);
          }
        }
      }
      total.add(face_r / dr * cell * radial.value());
      total.add(r * dr * s.dtheta() / dz * axial.value());
      total.add(dr * s.dtheta() * dz / r * angular.value());
    }
    stiffness = total.value();
  }

  const double rest = volume_sum(s, [&](int i, int, int j, std::size_t n) {
    const auto ev = e.at(n);
    const auto wv = w.at(n);
    const double dot = ev[0] * wv[0] + ev[1] * wv[1] + ev[2] * wv[2];
    const double mag = std::sqrt(ev[0] * ev[0] + ev[1] * ev[1] + ev[2] * ev[2]);
    const std::size_t node = g.index(i, j);
    const double h = mag > 0.0 ? prob.f_tilde(node, i, j, mag) / mag : 0.0;
    return (vpot[node] - h) * dot;
  });
  const double value = stiffness + rest;
  if (!std::isfinite(value)) throw Error(ErrorKind::non_finite, "Maxwell weak residual is not finite");
  return value;
}

EquivalenceCertificate certify_equivalence(const Problem& prob, const ScalarField& u,
                                           const CertifyOptions& options) {
  if (!(u.grid() == prob.grid())) {
    throw Error(ErrorKind::invalid_argument, "field and problem live on different grids");
  }
  EquivalenceCertificate cert;
  const VectorField3 e = reconstruct_E(u, options.n_theta);
  const DerivativeIntegrals di = derivative_integrals(e);

  cert.energy_J = energy_J(prob, u).total;
  cert.energy_E = 0.5 * di.curl_sq + potential_and_nonlinear(prob, e);
  cert.energy_gap = std::abs(cert.energy_E - cert.energy_J);
  if (cert.energy_gap > 0.0) cert.relative_energy_gap = cert.energy_gap / std::abs(cert.energy_J);
  cert.curl_energy = di.curl_sq;
  cert.div_norm = std::sqrt(std::max(0.0, di.div_sq));

  const auto vpot = prob.op().potential_values();
  const auto uv = u.values();
  std::vector<double> vu(uv.size());
  for (std::size_t n = 0; n < uv.size(); ++n) vu[n] = vpot[n] * uv[n];
  const double dirichlet = quadratic_form(prob, u) - inner_w(prob.grid(), vu, uv);
  cert.curl_identity_gap = std::abs(di.curl_sq - dirichlet);
  cert.curl_grad_gap = std::abs(di.curl_sq + di.div_sq - di.grad_sq);

  const ExtractedField back = extract_u(e);
  const ScalarField diff = back.u - u;
  cert.u_roundtrip_error = std::sqrt(std::max(0.0, inner_w(diff, diff)));
  cert.form_residual = back.form_residual;

  for (int t = 0; t < options.n_tests; ++t) {
    ScalarField v = random_bump(prob.grid_ptr(), options.seed + static_cast<std::uint64_t>(t));
    v *= 1.0 / q_norm(prob, v);
    WeakResidualCheck check;
    check.schrodinger = directional_derivative(prob, u, v);
    check.maxwell = maxwell_weak_residual(prob, e, reconstruct_unchecked(v, e.sampling_ptr()),
                                          options.pairing);
    check.mismatch = std::abs(check.maxwell - check.schrodinger) / (1.0 + std::abs(check.schrodinger));
    cert.max_weak_mismatch = std::max(cert.max_weak_mismatch, check.mismatch);
    cert.weak.push_back(check);
  }
  return cert;
}

}  // namespace curlvar
