// Pointwise scalar curvature, volume, and total scalar curvature of a
// profile metric g = dt^2 + f^2 g_{S^{n-1}}, plus the conjectured
// eigenvalue bound (n / (4(n-1))) * (total S / vol).
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "spingeo/common.hpp"
#include "spingeo/profile.hpp"

namespace spingeo {

/// Volume of the unit m-sphere: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
inline double unit_sphere_volume(int m) {
  return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

struct CurvatureField {
  std::vector<double> S;                 // per node
  double S_min = 0.0;                    // minimum over nodes
  std::vector<double> region_integrals;  // int S dvol per region
};

struct GlobalQuantities {
  double vol = 0.0;      // total volume
  double total_S = 0.0;  // int_M S dvol
  double ratio = 0.0;    // total_S / vol
  double omega = 0.0;    // omega_{n-1}
};

/// Warped-product scalar curvature
///   S = -2(n-1) f''/f + (n-1)(n-2)(1 - f'^2)/f^2
/// at interior nodes; pole values by one-sided quadratic extrapolation.
inline CurvatureField scalar_curvature_field(const ProfileGrid& p) {
  const int n = p.dim;
  const std::size_t m = p.node_count();
  if (m < 5) throw SpecError("curvature: grid too small");
  CurvatureField c;
  c.S.assign(m, 0.0);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double f = p.f[i];
    if (!(f > 1e-12)) throw ResolutionError("curvature: profile not positive at an interior node");
    c.S[i] = -2.0 * (n - 1) * p.f2[i] / f +
             double(n - 1) * (n - 2) * (1.0 - p.f1[i] * p.f1[i]) / (f * f);
  }
  c.S[0] = quadratic_extrapolate(p.t[0], p.t[1], c.S[1], p.t[2], c.S[2], p.t[3],
                                 c.S[3]);
  c.S[m - 1] = quadratic_extrapolate(p.t[m - 1], p.t[m - 2], c.S[m - 2],
                                     p.t[m - 3], c.S[m - 3], p.t[m - 4],
                                     c.S[m - 4]);
  c.S_min = c.S[0];
  for (double v : c.S) c.S_min = std::min(c.S_min, v);

  const double omega = unit_sphere_volume(n - 1);
  c.region_integrals.reserve(p.regions.size());
  std::vector<double> integrand(m);
  for (std::size_t i = 0; i < m; ++i)
    integrand[i] = c.S[i] * std::pow(p.f[i], n - 1);
  for (const auto& reg : p.regions)
    c.region_integrals.push_back(
        omega * simpson_uniform(integrand, reg.first_node, reg.last_node, reg.h));
  return c;
}

/// Volume and total scalar curvature by composite Simpson quadrature with
/// region boundaries as breakpoints.
inline GlobalQuantities global_quantities(const ProfileGrid& p,
                                          const CurvatureField& c) {
  const int n = p.dim;
  GlobalQuantities q;
  q.omega = unit_sphere_volume(n - 1);
  const std::size_t m = p.node_count();
  std::vector<double> w(m), sw(m);
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = std::pow(p.f[i], n - 1);
    sw[i] = c.S[i] * w[i];
  }
  for (const auto& reg : p.regions) {
    q.vol += q.omega * simpson_uniform(w, reg.first_node, reg.last_node, reg.h);
    q.total_S +=
        q.omega * simpson_uniform(sw, reg.first_node, reg.last_node, reg.h);
  }
  q.ratio = q.total_S / q.vol;
  return q;
}

/// Right-hand side of the conjectured bound; may be negative.
inline double conjectured_bound(const GlobalQuantities& q, int n) {
  return double(n) / (4.0 * (n - 1)) * q.ratio;
}

inline double conjectured_bound_from_ratio(double ratio, int n) {
  return double(n) / (4.0 * (n - 1)) * ratio;
}

}  // namespace spingeo
