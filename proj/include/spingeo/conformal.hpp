// Conformal change g1 = u^{4/(n-2)} g for radial positive u: the Yamabe
// operator applied pointwise, the conformal scalar curvature, the total
// scalar curvature identity, and the epsilon-regularized unboundedness
// sweep built from radial Yamabe eigenfunctions.
//
// The identity check is two-route by construction: int u Y(u) dvol uses the
// Yamabe operator on the original profile, while int S1 dvol1 is computed
// geometrically by reparametrizing g1 = ds^2 + ftilde(s)^2 g_{S^{n-1}} with
// ds = u^{2/(n-2)} dt, ftilde = u^{2/(n-2)} f and running the warped-product
// curvature formula on the new profile. The two discretizations are
// independent, so the residual measures discretization error rather than an
// algebraic tautology.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "spingeo/common.hpp"
#include "spingeo/eigensolve.hpp"
#include "spingeo/geometry.hpp"
#include "spingeo/modes.hpp"
#include "spingeo/profile.hpp"
#include "spingeo/radial_operators.hpp"

namespace spingeo {

/// Y(u) = 4 (n-1)/(n-2) (-u'' - (n-1) (f'/f) u') + S u at the nodes, poles
/// by one-sided quadratic extrapolation. u is sampled on the profile nodes.
inline std::vector<double> yamabe_apply(const ProfileGrid& p,
                                        const CurvatureField& c,
                                        const std::vector<double>& u) {
  const int n = p.dim;
  if (n < 3) throw SpecError("yamabe_apply: undefined for n = 2");
  if (u.size() != p.node_count())
    throw SpecError("yamabe_apply: u must be sampled on the profile nodes");
  const std::size_t m = p.last_node();
  const double a = 4.0 * (n - 1) / double(n - 2);
  std::vector<double> out(m + 1, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double du = fd_first(p.t[i - 1], u[i - 1], p.t[i], u[i], p.t[i + 1], u[i + 1]);
    const double ddu = fd_second(p.t[i - 1], u[i - 1], p.t[i], u[i], p.t[i + 1], u[i + 1]);
    const double lap = -ddu - (n - 1) * (p.f1[i] / p.f[i]) * du;
    out[i] = a * lap + c.S[i] * u[i];
  }
  out[0] = quadratic_extrapolate(p.t[0], p.t[1], out[1], p.t[2], out[2], p.t[3], out[3]);
  out[m] = quadratic_extrapolate(p.t[m], p.t[m - 1], out[m - 1], p.t[m - 2],
                                 out[m - 2], p.t[m - 3], out[m - 3]);
  return out;
}

struct ConformalReport {
  std::vector<double> u;
  double eps = 0.0;                // regularization parameter, when used
  std::vector<double> S1;          // u^{-(n+2)/(n-2)} Y(u) per node
  double total_S1 = 0.0;           // geometric route (reparametrized profile)
  double total_S1_formula = 0.0;   // quadrature of S1 u^{2n/(n-2)} f^{n-1}
  double vol1 = 0.0;               // int u^{2n/(n-2)} dvol
  double int_u_Yu = 0.0;           // int u Y(u) dvol
  double identity_residual = 0.0;  // |total_S1 - int_u_Yu| / max(1, |total_S1|)
  double mu = 0.0;                 // source eigenvalue when applicable
};

namespace detail {

inline double simpson_all_regions(const ProfileGrid& p,
                                  const std::vector<double>& integrand) {
  double acc = 0.0;
  for (const auto& reg : p.regions)
    acc += simpson_uniform(integrand, reg.first_node, reg.last_node, reg.h);
  return acc;
}

}  // namespace detail

/// Conformal scalar curvature and the total-scalar-curvature identity data
/// for a positive radial conformal factor.
inline ConformalReport conformal_scalar_curvature(const ProfileGrid& p,
                                                  const CurvatureField& c,
                                                  const std::vector<double>& u) {
  const int n = p.dim;
  if (n < 3) throw SpecError("conformal change: undefined for n = 2");
  if (u.size() != p.node_count())
    throw SpecError("conformal change: u must be sampled on the profile nodes");
  for (double v : u)
    if (!(v > 0.0)) throw SpecError("conformal change: u must be positive");

  const std::size_t m = p.last_node();
  const double omega = unit_sphere_volume(n - 1);
  ConformalReport rep;
  rep.u = u;
  auto Yu = yamabe_apply(p, c, u);

  rep.S1.assign(m + 1, 0.0);
  const double expo = -double(n + 2) / (n - 2);
  for (std::size_t i = 0; i <= m; ++i)
    rep.S1[i] = std::pow(u[i], expo) * Yu[i];

  // spec-route quadratures on the original grid
  std::vector<double> w1(m + 1), w2(m + 1), w3(m + 1);
  const double voln = 2.0 * n / double(n - 2);
  for (std::size_t i = 0; i <= m; ++i) {
    const double fw = std::pow(p.f[i], n - 1);
    w1[i] = rep.S1[i] * std::pow(u[i], voln) * fw;
    w2[i] = u[i] * Yu[i] * fw;
    w3[i] = std::pow(u[i], voln) * fw;
  }
  rep.total_S1_formula = omega * detail::simpson_all_regions(p, w1);
  rep.int_u_Yu = omega * detail::simpson_all_regions(p, w2);
  rep.vol1 = omega * detail::simpson_all_regions(p, w3);

  // geometric route: reparametrize g1 as a warped product and rerun the
  // scalar-curvature formula
  const double ce = 2.0 / double(n - 2);
  std::vector<double> phi(m + 1), ft(m + 1), fts(m + 1), ftss(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    phi[i] = std::pow(u[i], ce);
    ft[i] = phi[i] * p.f[i];
  }
  for (std::size_t i = 1; i < m; ++i)
    fts[i] = fd_first(p.t[i - 1], ft[i - 1], p.t[i], ft[i], p.t[i + 1], ft[i + 1]) / phi[i];
  fts[0] = 1.0;   // pole closure of the conformal profile
  fts[m] = -1.0;
  for (std::size_t i = 1; i < m; ++i)
    ftss[i] =
        fd_first(p.t[i - 1], fts[i - 1], p.t[i], fts[i], p.t[i + 1], fts[i + 1]) / phi[i];
  std::vector<double> S1geo(m + 1, 0.0);
  for (std::size_t i = 1; i < m; ++i)
    S1geo[i] = -2.0 * (n - 1) * ftss[i] / ft[i] +
               double(n - 1) * (n - 2) * (1.0 - fts[i] * fts[i]) / (ft[i] * ft[i]);
  S1geo[0] = quadratic_extrapolate(p.t[0], p.t[1], S1geo[1], p.t[2], S1geo[2],
                                   p.t[3], S1geo[3]);
  S1geo[m] = quadratic_extrapolate(p.t[m], p.t[m - 1], S1geo[m - 1], p.t[m - 2],
                                   S1geo[m - 2], p.t[m - 3], S1geo[m - 3]);
  std::vector<double> wg(m + 1);
  for (std::size_t i = 0; i <= m; ++i)
    wg[i] = S1geo[i] * std::pow(ft[i], n - 1) * phi[i];
  rep.total_S1 = omega * detail::simpson_all_regions(p, wg);

  rep.identity_residual = std::abs(rep.total_S1 - rep.int_u_Yu) /
                          std::max(1.0, std::abs(rep.total_S1));
  return rep;
}

/// The central identity int S1 dvol1 = int u Y(u) dvol, as a relative
/// residual.
inline double total_scalar_identity_check(const ConformalReport& rep) {
  return rep.identity_residual;
}

struct EpsilonRow {
  double eps;
  double integral;    // int u_eps Y(u_eps) dvol
  double normalized;  // integral / int u_eps^2 dvol
};

struct EpsilonSweep {
  int mode_index = 0;
  double mu = 0.0;
  std::vector<EpsilonRow> rows;
  double extrapolated = 0.0;  // linear-in-eps extrapolation to 0
  double residual = 0.0;      // |extrapolated - mu|
};

/// Core sweep for a given (mu, u) pair with int u^2 dvol = 1 enforced here.
inline EpsilonSweep epsilon_unboundedness_sweep(const ProfileGrid& p,
                                                const CurvatureField& c,
                                                double mu, std::vector<double> u,
                                                const std::vector<double>& eps_list,
                                                int mode_index = 0) {
  const int n = p.dim;
  if (n < 3) throw SpecError("epsilon sweep: undefined for n = 2");
  if (!(mu > 0.0))
    throw SpecError("epsilon sweep: requires a positive Yamabe eigenvalue");
  if (eps_list.empty()) throw SpecError("epsilon sweep: empty eps list");
  const std::size_t m = p.last_node();
  const double omega = unit_sphere_volume(n - 1);

  std::vector<double> fw(m + 1);
  for (std::size_t i = 0; i <= m; ++i) fw[i] = std::pow(p.f[i], n - 1);
  std::vector<double> u2w(m + 1);
  for (std::size_t i = 0; i <= m; ++i) u2w[i] = u[i] * u[i] * fw[i];
  const double norm = omega * detail::simpson_all_regions(p, u2w);
  for (double& v : u) v /= std::sqrt(norm);

  EpsilonSweep sweep;
  sweep.mode_index = mode_index;
  sweep.mu = mu;
  for (double eps : eps_list) {
    std::vector<double> ue(m + 1), integ(m + 1), mass(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
      ue[i] = std::sqrt(u[i] * u[i] + eps);
    auto Yue = yamabe_apply(p, c, ue);
    for (std::size_t i = 0; i <= m; ++i) {
      integ[i] = ue[i] * Yue[i] * fw[i];
      mass[i] = ue[i] * ue[i] * fw[i];
    }
    EpsilonRow row;
    row.eps = eps;
    row.integral = omega * detail::simpson_all_regions(p, integ);
    row.normalized =
        row.integral / (omega * detail::simpson_all_regions(p, mass));
    sweep.rows.push_back(row);
  }
  if (sweep.rows.size() >= 2) {
    const auto& r1 = sweep.rows[sweep.rows.size() - 2];
    const auto& r2 = sweep.rows.back();
    sweep.extrapolated =
        r2.normalized -
        r2.eps * (r1.normalized - r2.normalized) / (r1.eps - r2.eps);
  } else {
    sweep.extrapolated = sweep.rows.back().normalized;
  }
  sweep.residual = std::abs(sweep.extrapolated - mu);
  return sweep;
}

/// Radial Yamabe eigenpair (mu_j, u_j) from the l = 0 problem.
inline std::pair<double, std::vector<double>> yamabe_radial_eigenpair(
    const ProfileGrid& p, const CurvatureField& c, int j,
    double solver_tol = 0.0) {
  auto op = assemble_yamabe_radial(p, c, laplace_modes(p.dim, 0)[0]);
  auto res = lowest_k_generalized(op.A, op.B, std::size_t(j) + 1, solver_tol);
  const double mu = res.values[std::size_t(j)];
  auto u = generalized_eigenvector(op.A, op.B, mu);
  return {mu, std::move(u)};
}

/// Sweep driver from the j-th radial Yamabe eigenpair.
inline EpsilonSweep epsilon_unboundedness_sweep(const ProfileGrid& p,
                                                const CurvatureField& c,
                                                int mode_index,
                                                const std::vector<double>& eps_list,
                                                double solver_tol = 0.0) {
  auto [mu, u] = yamabe_radial_eigenpair(p, c, mode_index, solver_tol);
  return epsilon_unboundedness_sweep(p, c, mu, std::move(u), eps_list, mode_index);
}

}  // namespace spingeo
