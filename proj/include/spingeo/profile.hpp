// Rotationally symmetric profiles f : [0, T] -> (0, inf) realizing the warped
// metric g = dt^2 + f(t)^2 g_{S^{n-1}(1)} on S^n. A Pinocchio profile splices
// a thin cylindrical neck of radius r and length L between a fixed spherical
// body and a small hemispherical nose cap.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "spingeo/common.hpp"

namespace spingeo {

struct ProfileSpec {
  int n = 3;               // sphere dimension
  double r = 0.1;          // neck radius, 0 < r < min(0.9, sin(t_body))
  double L = 10.0;         // neck length, >= 0
  double t_body = 2.0;     // body extent
  double w_taper = 1.0;    // taper width
  double w_blend = -1.0;   // C^2 smoothing width at the neck/nose joint; < 0 -> 0.1 r
  int N = 64;              // grid cells per unit length, >= 16

  double blend_width() const { return w_blend < 0.0 ? 0.1 * r : w_blend; }
};

enum class RegionKind { Body, Taper, Neck, NoseCap };

inline const char* region_name(RegionKind k) {
  switch (k) {
    case RegionKind::Body: return "Body";
    case RegionKind::Taper: return "Taper";
    case RegionKind::Neck: return "Neck";
    case RegionKind::NoseCap: return "NoseCap";
  }
  return "?";
}

struct Region {
  RegionKind kind;
  std::size_t first_node, last_node;  // inclusive node span
  double t0, t1;
  double h;            // uniform spacing inside the region
  std::size_t cells;   // even cell count
};

struct Joint {
  std::size_t node;
  double f2_left, f2_right;  // analytic one-sided second derivatives
};

struct ProfileGrid {
  int dim = 3;   // n
  int N = 0;     // requested cells per unit length
  int refine = 1;
  bool is_round = false;  // rebuild provenance
  double R = 0.0;         // round radius when is_round
  ProfileSpec spec;       // generating spec otherwise
  double T = 0.0;
  std::vector<double> t, f, f1, f2;
  std::vector<double> f_mid;   // analytic f at cell midpoints, size node_count()-1
  std::vector<double> h_cell;  // cell widths, size node_count()-1
  std::vector<Region> regions;
  std::vector<Joint> joints;

  std::size_t node_count() const { return t.size(); }
  std::size_t last_node() const { return t.size() - 1; }

  const Region* find_region(RegionKind k) const {
    for (const auto& r : regions)
      if (r.kind == k) return &r;
    return nullptr;
  }
};

struct ValidationReport {
  double max_joint_jump = 0.0;
  double positivity_margin = 0.0;
  double pole_residual_left = 0.0;
  double pole_residual_right = 0.0;
  bool pass = false;
};

namespace detail {

/// Even base cell count for a region of given length at resolution N,
/// snapping near-integer products so nested refinements double exactly.
inline std::size_t region_cells_base(double len, int N) {
  const double x = len * double(N) / 2.0;
  const double rounded = std::round(x);
  std::size_t half;
  if (std::abs(x - rounded) < 1e-9 * std::max(1.0, std::abs(x)))
    half = std::size_t(rounded);
  else
    half = std::size_t(std::ceil(x));
  half = std::max<std::size_t>(1, half);
  return 2 * half;
}

inline std::size_t region_cells(double len, int N, int refine) {
  return region_cells_base(len, N) * std::size_t(refine);
}

/// Quintic Hermite interpolant matching value/derivative/second derivative
/// at both ends of [a, b]. Evaluation returns {p, p', p''}.
struct QuinticHermite {
  double a, h;
  double v0, d0, dd0, v1, d1, dd1;

  std::array<double, 3> eval(double t) const {
    const double s = (t - a) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double H0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double H1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double H3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const double H4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double H5 = 0.5 * s3 - s4 + 0.5 * s5;
    const double dH0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double dH1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double dH2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
    const double dH3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    const double dH4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    const double dH5 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;
    const double cH0 = -60.0 * s + 180.0 * s2 - 120.0 * s3;
    const double cH1 = -36.0 * s + 96.0 * s2 - 60.0 * s3;
    const double cH2 = 1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3;
    const double cH3 = 60.0 * s - 180.0 * s2 + 120.0 * s3;
    const double cH4 = -24.0 * s + 84.0 * s2 - 60.0 * s3;
    const double cH5 = 3.0 * s - 12.0 * s2 + 10.0 * s3;
    const double p = v0 * H0 + d0 * h * H1 + dd0 * h * h * H2 + v1 * H3 +
                     d1 * h * H4 + dd1 * h * h * H5;
    const double dp = (v0 * dH0 + d0 * h * dH1 + dd0 * h * h * dH2 + v1 * dH3 +
                       d1 * h * dH4 + dd1 * h * h * dH5) /
                      h;
    const double cp = (v0 * cH0 + d0 * h * cH1 + dd0 * h * h * cH2 + v1 * cH3 +
                       d1 * h * cH4 + dd1 * h * h * cH5) /
                      (h * h);
    return {p, dp, cp};
  }
};

/// Smooth transition sigma on [0,1] with all derivatives vanishing at both
/// ends (exp bump partition), so the blended cap profile stays C^infinity
/// and per-region Simpson keeps its full order. Returns {sigma, sigma', sigma''}.
inline std::array<double, 3> smooth_transition(double s) {
  if (s <= 0.0) return {0.0, 0.0, 0.0};
  if (s >= 1.0) return {1.0, 0.0, 0.0};
  const double q = 1.0 - s;
  const double A = std::exp(-1.0 / s), B = std::exp(-1.0 / q);
  const double A1 = A / (s * s);
  const double A2 = A * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
  const double B1 = -B / (q * q);
  const double B2 = B * (1.0 / (q * q * q * q) - 2.0 / (q * q * q));
  const double D = A + B, D1 = A1 + B1, D2 = A2 + B2;
  const double sig = A / D;
  const double sig1 = (A1 * D - A * D1) / (D * D);
  const double sig2 = (A2 * D - A * D2) / (D * D) - 2.0 * D1 * sig1 / D;
  return {sig, sig1, sig2};
}

}  // namespace detail

/// Round sphere S^n(R): f(t) = R sin(t/R) on [0, pi R].
inline ProfileGrid build_round_profile(int n, double R, int N = 64,
                                       int refine = 1) {
  if (n < 2) throw SpecError("round profile: n must be >= 2");
  if (!(R > 0.0)) throw SpecError("round profile: R must be positive");
  if (N < 16) throw SpecError("round profile: N must be >= 16");
  ProfileGrid g;
  g.dim = n;
  g.N = N;
  g.refine = refine;
  g.is_round = true;
  g.R = R;
  g.T = kPi * R;
  const std::size_t m = detail::region_cells(g.T, N, refine);
  const double h = g.T / double(m);
  g.t.resize(m + 1);
  g.f.resize(m + 1);
  g.f1.resize(m + 1);
  g.f2.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double t = double(j) * h;
    g.t[j] = t;
    g.f[j] = R * std::sin(t / R);
    g.f1[j] = std::cos(t / R);
    g.f2[j] = -std::sin(t / R) / R;
  }
  // exact pole closure
  g.t[m] = g.T;
  g.f[0] = g.f[m] = 0.0;
  g.f1[0] = 1.0;
  g.f1[m] = -1.0;
  g.f2[0] = g.f2[m] = 0.0;
  g.f_mid.resize(m);
  g.h_cell.assign(m, h);
  for (std::size_t j = 0; j < m; ++j)
    g.f_mid[j] = R * std::sin((double(j) + 0.5) * h / R);
  g.regions.push_back({RegionKind::Body, 0, m, 0.0, g.T, h, m});
  return g;
}

/// Pinocchio profile: sin t on the body, a quintic C^2 taper down to radius r,
/// a cylindrical neck of exact length L and value r, and a hemispherical nose
/// cap of radius r, optionally C^2-blended at the neck/nose joint.
inline ProfileGrid build_pinocchio_profile(const ProfileSpec& spec,
                                           int refine = 1) {
  if (spec.n < 2) throw SpecError("profile spec: n must be >= 2");
  if (!(spec.t_body > 0.0 && spec.t_body < kPi))
    throw SpecError("profile spec: t_body must lie in (0, pi)");
  const double f_body_end = std::sin(spec.t_body);
  if (!(spec.r > 0.0 && spec.r < std::min(0.9, f_body_end)))
    throw SpecError("profile spec: need 0 < r < min(0.9, sin(t_body))");
  if (!(spec.L >= 0.0)) throw SpecError("profile spec: L must be >= 0");
  if (!(spec.w_taper > 0.0)) throw SpecError("profile spec: w_taper must be positive");
  if (spec.N < 16) throw SpecError("profile spec: N must be >= 16");
  const double cap_len = spec.r * kPi / 2.0;
  const double w_blend = spec.blend_width();
  if (!(w_blend >= 0.0 && w_blend < 0.9 * cap_len))
    throw SpecError("profile spec: w_blend must lie in [0, 0.9 * r * pi/2)");

  detail::QuinticHermite taper{
      spec.t_body,          spec.w_taper,  f_body_end,
      std::cos(spec.t_body), -f_body_end,  spec.r,
      0.0,                  0.0};
  // Reject tapers that dip to zero or leave the admissible envelope. Past
  // the equator the taper must stay below the junction value; before it the
  // junction slope is positive, so the bound is the unit-sphere envelope.
  {
    const double envelope = std::cos(spec.t_body) <= 0.0 ? f_body_end : 1.0;
    const int samples = 4096;
    for (int i = 0; i <= samples; ++i) {
      const double t = spec.t_body + spec.w_taper * double(i) / samples;
      const double v = taper.eval(t)[0];
      if (!(v > 0.0))
        throw SpecError("profile spec: taper blend not strictly positive");
      if (v > envelope * (1.0 + 1e-12))
        throw SpecError("profile spec: taper blend leaves the admissible envelope");
    }
  }

  ProfileGrid g;
  g.dim = spec.n;
  g.N = spec.N;
  g.refine = refine;
  g.spec = spec;
  const double neck_t0 = spec.t_body + spec.w_taper;
  const double cap_t0 = neck_t0 + spec.L;
  g.T = cap_t0 + cap_len;

  struct Piece {
    RegionKind kind;
    double t0, len;
  };
  std::vector<Piece> pieces;
  pieces.push_back({RegionKind::Body, 0.0, spec.t_body});
  pieces.push_back({RegionKind::Taper, spec.t_body, spec.w_taper});
  if (spec.L > 0.0) pieces.push_back({RegionKind::Neck, neck_t0, spec.L});
  pieces.push_back({RegionKind::NoseCap, cap_t0, cap_len});

  const double r = spec.r;
  // Analytic evaluation per region; the cap uses the distance s to the far
  // pole so that its node data is independent of L bit for bit.
  auto eval_cap = [&](double s) -> std::array<double, 3> {
    const double fc = r * std::sin(s / r);
    const double fc1 = -std::cos(s / r);
    const double fc2 = -std::sin(s / r) / r;
    if (w_blend > 0.0 && s > cap_len - w_blend) {
      const double xi = (cap_len - s) / w_blend;
      const auto sg = detail::smooth_transition(xi);
      const double sgd = sg[1] / w_blend;
      const double sgdd = sg[2] / (w_blend * w_blend);
      return {r + sg[0] * (fc - r), sgd * (fc - r) + sg[0] * fc1,
              sgdd * (fc - r) + 2.0 * sgd * fc1 + sg[0] * fc2};
    }
    return {fc, fc1, fc2};
  };

  // The blended cap carries a genuine curvature feature of width w_blend;
  // its cell count must resolve that window no matter how small r is.
  std::size_t cap_base = detail::region_cells_base(cap_len, spec.N);
  if (w_blend > 0.0) {
    const double need = 8.0 * cap_len / w_blend;
    std::size_t blend_min = 2 * std::size_t(std::ceil(need / 2.0));
    cap_base = std::max(cap_base, blend_min);
  }

  for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
    const Piece& p = pieces[pi];
    const std::size_t m = p.kind == RegionKind::NoseCap
                              ? cap_base * std::size_t(refine)
                              : detail::region_cells(p.len, spec.N, refine);
    const double h = p.len / double(m);
    const std::size_t first = g.t.empty() ? 0 : g.t.size() - 1;
    const std::size_t j0 = g.t.empty() ? 0 : 1;
    for (std::size_t j = j0; j <= m; ++j) {
      std::array<double, 3> v{};
      double t;
      switch (p.kind) {
        case RegionKind::Body: {
          t = double(j) * h;
          v = {std::sin(t), std::cos(t), -std::sin(t)};
          break;
        }
        case RegionKind::Taper: {
          t = p.t0 + double(j) * h;
          v = taper.eval(spec.t_body + double(j) * h);
          break;
        }
        case RegionKind::Neck: {
          t = p.t0 + double(j) * h;
          v = {r, 0.0, 0.0};
          break;
        }
        case RegionKind::NoseCap: {
          t = p.t0 + double(j) * h;
          const double s = cap_len * double(m - j) / double(m);
          v = eval_cap(s);
          break;
        }
      }
      g.t.push_back(t);
      g.f.push_back(v[0]);
      g.f1.push_back(v[1]);
      g.f2.push_back(v[2]);
    }
    for (std::size_t j = 0; j < m; ++j) {
      double fm = 0.0;
      switch (p.kind) {
        case RegionKind::Body: fm = std::sin((double(j) + 0.5) * h); break;
        case RegionKind::Taper:
          fm = taper.eval(spec.t_body + (double(j) + 0.5) * h)[0];
          break;
        case RegionKind::Neck: fm = r; break;
        case RegionKind::NoseCap:
          fm = eval_cap(cap_len * (double(m - j) - 0.5) / double(m))[0];
          break;
      }
      g.f_mid.push_back(fm);
      g.h_cell.push_back(h);
    }
    g.regions.push_back({p.kind, first, g.t.size() - 1, p.t0, p.t0 + p.len, h, m});
  }

  // exact pole closure at both ends
  g.f[0] = 0.0;
  g.f1[0] = 1.0;
  g.f2[0] = 0.0;
  g.f.back() = 0.0;
  g.f1.back() = -1.0;
  g.f2.back() = 0.0;
  g.t.back() = g.T;

  // analytic one-sided second derivatives at region joints
  auto left_f2 = [&](const Piece& p) -> double {
    switch (p.kind) {
      case RegionKind::Body: return -f_body_end;
      case RegionKind::Taper: return 0.0;
      case RegionKind::Neck: return 0.0;
      case RegionKind::NoseCap: return 0.0;
    }
    return 0.0;
  };
  auto right_f2 = [&](const Piece& p) -> double {
    switch (p.kind) {
      case RegionKind::Body: return 0.0;
      case RegionKind::Taper: return -f_body_end;
      case RegionKind::Neck: return 0.0;
      case RegionKind::NoseCap: return eval_cap(cap_len)[2];
    }
    return 0.0;
  };
  for (std::size_t pi = 0; pi + 1 < pieces.size(); ++pi)
    g.joints.push_back({g.regions[pi].last_node, left_f2(pieces[pi]),
                        right_f2(pieces[pi + 1])});
  return g;
}

/// Same profile at a different refinement multiple (nested grids).
inline ProfileGrid rebuild_profile(const ProfileGrid& g, int refine) {
  return g.is_round ? build_round_profile(g.dim, g.R, g.N, refine)
                    : build_pinocchio_profile(g.spec, refine);
}

/// Report-only validation: joint smoothness, positivity, pole closure.
inline ValidationReport validate_profile(const ProfileGrid& g, double tol) {
  ValidationReport rep;
  for (const auto& j : g.joints)
    rep.max_joint_jump =
        std::max(rep.max_joint_jump, std::abs(j.f2_right - j.f2_left));
  double fmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < g.node_count(); ++i) fmin = std::min(fmin, g.f[i]);
  rep.positivity_margin = fmin;
  rep.pole_residual_left = std::abs(g.f1.front() - 1.0);
  rep.pole_residual_right = std::abs(g.f1.back() + 1.0);
  rep.pass = rep.max_joint_jump <= tol && rep.pole_residual_left <= tol &&
             rep.pole_residual_right <= tol && rep.positivity_margin > 0.0;
  return rep;
}

/// CSV emission: t, f, f1, f2, region.
inline void write_profile_csv(const ProfileGrid& g, std::ostream& os) {
  os << "t,f,f1,f2,region\n";
  char buf[160];
  for (const auto& reg : g.regions) {
    for (std::size_t i = reg.first_node; i <= reg.last_node; ++i) {
      if (i != reg.first_node || reg.first_node == 0) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s\n", g.t[i],
                      g.f[i], g.f1[i], g.f2[i], region_name(reg.kind));
        os << buf;
      }
    }
  }
}

}  // namespace spingeo
