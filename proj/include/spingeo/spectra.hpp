// Manifold spectra assembled from per-mode radial eigenproblems, with
// multiplicities, certified truncation control, and Richardson error
// estimates.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spingeo/eigensolve.hpp"
#include "spingeo/geometry.hpp"
#include "spingeo/modes.hpp"
#include "spingeo/profile.hpp"
#include "spingeo/radial_operators.hpp"

namespace spingeo {

enum class SpectrumOperator { Dirac, LaplaceFunctions, Yamabe };

inline const char* operator_name(SpectrumOperator op) {
  switch (op) {
    case SpectrumOperator::Dirac: return "dirac";
    case SpectrumOperator::LaplaceFunctions: return "laplace";
    case SpectrumOperator::Yamabe: return "yamabe";
  }
  return "?";
}

struct SpectrumEntry {
  double value;
  std::int64_t mult;
  std::string mode;  // provenance, e.g. "l=0" or "mu=1.5" (merged: "l=0;l=1")
  double err;        // Richardson estimate when requested, else 0
};

struct Spectrum {
  SpectrumOperator op = SpectrumOperator::LaplaceFunctions;
  int n = 0, N = 0, refine = 1;
  std::vector<SpectrumEntry> entries;  // sorted by |value| (Dirac) or value
  double truncation_floor = 0.0;       // listed spectrum complete below this
  bool floor_certified = false;

  /// k-th value counting multiplicity (1-based); requires enough entries.
  double kth_value(std::int64_t k) const {
    std::int64_t seen = 0;
    for (const auto& e : entries) {
      seen += e.mult;
      if (seen >= k) return e.value;
    }
    throw ResolutionError("spectrum: fewer than k eigenvalues assembled");
  }
  std::int64_t total_count() const {
    std::int64_t c = 0;
    for (const auto& e : entries) c += e.mult;
    return c;
  }
};

struct SpectrumOptions {
  double solver_tol = 0.0;   // 0: eigensolver default
  bool with_errors = false;  // per-entry Richardson at doubled resolution
  // Degenerate branches from different modes land within the discretization
  // error of each other; the acceptance-level accuracy target is 1e-3
  // relative, so clustering uses twice that.
  double cluster_rtol = 2e-3;
  double cluster_atol = 1e-9;
  int max_modes = 128;
  int chunk = 8;
};

namespace detail {

struct RawEntry {
  double value;
  std::int64_t mult;
  std::string mode;
  double err;
  double sort_key;
};

inline std::vector<SpectrumEntry> cluster_sorted(std::vector<RawEntry> raw,
                                                 const SpectrumOptions& opt) {
  std::sort(raw.begin(), raw.end(),
            [](const RawEntry& a, const RawEntry& b) { return a.value < b.value; });
  std::vector<SpectrumEntry> out;
  for (auto& e : raw) {
    if (!out.empty()) {
      auto& last = out.back();
      const double tol =
          std::max({opt.cluster_atol, opt.cluster_rtol * std::abs(last.value),
                    5.0 * (last.err + e.err)});
      if (std::abs(e.value - last.value) <= tol) {
        // weighted merge keeps the cluster centroid stable
        const double wa = double(last.mult), wb = double(e.mult);
        last.value = (last.value * wa + e.value * wb) / (wa + wb);
        last.mult += e.mult;
        last.err = std::max(last.err, e.err);
        if (last.mode.find(e.mode) == std::string::npos)
          last.mode += ";" + e.mode;
        continue;
      }
    }
    out.push_back({e.value, e.mult, e.mode, e.err});
  }
  return out;
}

/// Cluster signed entries. Signs are clustered separately (a symmetric
/// spectrum interleaves them in magnitude order); the final ordering is by
/// value for scalar operators and by (|value|, value) for Dirac.
inline std::vector<SpectrumEntry> cluster_entries(std::vector<RawEntry> raw,
                                                  const SpectrumOptions& opt,
                                                  bool by_magnitude) {
  if (!by_magnitude) return cluster_sorted(std::move(raw), opt);
  std::vector<RawEntry> neg, pos;
  for (auto& e : raw) (e.value < 0.0 ? neg : pos).push_back(std::move(e));
  auto cn = cluster_sorted(std::move(neg), opt);
  auto cp = cluster_sorted(std::move(pos), opt);
  std::vector<SpectrumEntry> out;
  out.reserve(cn.size() + cp.size());
  auto in = cn.rbegin();  // negatives by increasing magnitude
  auto ip = cp.begin();
  while (in != cn.rend() || ip != cp.end()) {
    if (ip == cp.end()) {
      out.push_back(*in++);
    } else if (in == cn.rend()) {
      out.push_back(*ip++);
    } else if (std::abs(in->value) <= ip->value) {
      out.push_back(*in++);
    } else {
      out.push_back(*ip++);
    }
  }
  return out;
}

/// k-th smallest sort key counting multiplicity over raw entries; +inf when
/// fewer than k are present.
inline double kth_key(std::vector<RawEntry> raw, std::int64_t k) {
  std::sort(raw.begin(), raw.end(),
            [](const RawEntry& a, const RawEntry& b) { return a.sort_key < b.sort_key; });
  std::int64_t seen = 0;
  for (const auto& e : raw) {
    seen += e.mult;
    if (seen >= k) return e.sort_key;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Laplace (or Yamabe) spectrum on the profile manifold: iterate angular
/// modes, solve each radial problem for its lowest eigenvalues, merge with
/// multiplicities. The mode potential l(l+n-2)/f^2 is nondecreasing in l, so
/// iteration stops with certainty once the current mode minimum exceeds the
/// running k-th value.
inline Spectrum scalar_spectrum(const ProfileGrid& p, const CurvatureField* c,
                                std::int64_t k, SpectrumOperator which,
                                const SpectrumOptions& opt = {}) {
  if (k < 1) throw SpecError("spectrum: k must be >= 1");
  Spectrum sp;
  sp.op = which;
  sp.n = p.dim;
  sp.N = p.N;
  sp.refine = p.refine;
  std::vector<detail::RawEntry> raw;
  ProfileGrid fine;
  CurvatureField cf;
  if (opt.with_errors) {
    fine = rebuild_profile(p, 2 * p.refine);
    if (which == SpectrumOperator::Yamabe) cf = scalar_curvature_field(fine);
  }

  // eigenvalues near the discrete cutoff are not trustworthy; refuse to
  // certify anything beyond this scale
  double h_min = std::numeric_limits<double>::infinity();
  for (double h : p.h_cell) h_min = std::min(h_min, h);
  const double trust_cutoff = 0.1 / (h_min * h_min);

  double floor = 0.0;
  bool stopped = false;
  for (int ell = 0; ell < opt.max_modes; ++ell) {
    const auto mode = laplace_modes(p.dim, ell)[std::size_t(ell)];
    RadialOperator op = which == SpectrumOperator::Yamabe
                            ? assemble_yamabe_radial(p, *c, mode)
                            : assemble_laplace_radial(p, mode);
    RadialOperator opf;
    if (opt.with_errors) {
      opf = which == SpectrumOperator::Yamabe
                ? assemble_yamabe_radial(fine, cf, mode)
                : assemble_laplace_radial(fine, mode);
    }
    const std::string tag = "l=" + std::to_string(ell);
    double mode_lowest = std::numeric_limits<double>::infinity();
    std::size_t solved = 0;
    while (true) {
      const std::size_t hi =
          std::min(solved + std::size_t(opt.chunk), op.dim()) - 1;
      if (solved > hi) break;
      auto res =
          generalized_eigen_by_index(op.A, op.B, solved, hi, opt.solver_tol);
      EigenResult resf;
      if (opt.with_errors)
        resf = generalized_eigen_by_index(opf.A, opf.B, solved, hi, opt.solver_tol);
      for (std::size_t j = 0; j < res.values.size(); ++j) {
        // with errors on, report the finer value; the Richardson delta /3
        // estimates exactly that value's error
        const double v = opt.with_errors ? resf.values[j] : res.values[j];
        const double err =
            opt.with_errors ? std::abs(res.values[j] - resf.values[j]) / 3.0 : 0.0;
        raw.push_back({v, mode.mult, tag, err, v});
        if (solved + j == 0) mode_lowest = v;
      }
      solved = hi + 1;
      const double kth = detail::kth_key(raw, k);
      if (raw.size() && (res.values.empty() || res.values.back() > kth)) break;
      if (solved >= op.dim()) break;
    }
    const double kth = detail::kth_key(raw, k);
    if (std::isfinite(kth) && mode_lowest > kth) {
      if (kth > trust_cutoff)
        throw ResolutionError(
            "spectrum: requested k reaches past the resolvable range; increase N");
      floor = mode_lowest;
      stopped = true;
      break;
    }
  }
  if (!stopped)
    throw ResolutionError("spectrum: k not reachable; increase N or reduce k");
  sp.entries = detail::cluster_entries(std::move(raw), opt, false);
  sp.truncation_floor = floor;
  sp.floor_certified = true;  // mode minima are ordered by the form potential
  return sp;
}

inline Spectrum laplace_spectrum(const ProfileGrid& p, std::int64_t k,
                                 const SpectrumOptions& opt = {}) {
  return scalar_spectrum(p, nullptr, k, SpectrumOperator::LaplaceFunctions, opt);
}

inline Spectrum yamabe_spectrum(const ProfileGrid& p, const CurvatureField& c,
                                std::int64_t k, const SpectrumOptions& opt = {}) {
  return scalar_spectrum(p, &c, k, SpectrumOperator::Yamabe, opt);
}

/// Certified per-mode lower bound for |lambda| of the reduced Dirac system:
/// the SUSY potentials give lambda^2 >= min_t (mu^2 - mu |f'|) / f^2 when
/// that minimum is positive.
inline double dirac_mode_lower_bound(const ProfileGrid& p, double mu) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < p.node_count(); ++i) {
    const double num = mu * mu - mu * std::abs(p.f1[i]);
    if (num <= 0.0) return 0.0;
    worst = std::min(worst, num / (p.f[i] * p.f[i]));
  }
  return std::sqrt(worst);
}

/// Dirac spectrum: per fiber mode, smallest |eigenvalues| of the reduced
/// first-order pencil, mirrored exactly about zero, merged with the mode
/// system counts. Truncation is certified through the SUSY potential bound
/// when it is positive and monotone; otherwise an empirical stopping rule
/// (three consecutive modes past 1.5x the running k-th value) applies and
/// the floor is marked uncertified.
inline Spectrum dirac_spectrum(const ProfileGrid& p, std::int64_t k,
                               const SpectrumOptions& opt = {}) {
  if (k < 1) throw SpecError("spectrum: k must be >= 1");
  Spectrum sp;
  sp.op = SpectrumOperator::Dirac;
  sp.n = p.dim;
  sp.N = p.N;
  sp.refine = p.refine;
  std::vector<detail::RawEntry> raw;
  ProfileGrid fine;
  if (opt.with_errors) fine = rebuild_profile(p, 2 * p.refine);

  double max_f1 = 0.0;
  for (double d : p.f1) max_f1 = std::max(max_f1, std::abs(d));
  double h_min = std::numeric_limits<double>::infinity();
  for (double h : p.h_cell) h_min = std::min(h_min, h);
  const double trust_cutoff = std::sqrt(0.1) / h_min;

  double floor = 0.0;
  bool certified = false, stopped = false;
  int high_streak = 0;
  for (int km = 0; km < opt.max_modes; ++km) {
    const auto mode = dirac_modes(p.dim, km)[std::size_t(km)];
    const std::int64_t mult = dirac_mode_system_count(p.dim, mode);
    auto op = assemble_dirac_radial(p, mode);
    RadialOperator opf;
    if (opt.with_errors) opf = assemble_dirac_radial(fine, mode);
    const std::size_t half = op.dim() / 2;
    const std::string tag = [&] {
      char buf[32];
      std::snprintf(buf, sizeof buf, "mu=%g", mode.mu);
      return std::string(buf);
    }();
    double mode_lowest = std::numeric_limits<double>::infinity();
    std::size_t solved = 0;
    while (true) {
      const std::size_t hi = std::min(solved + std::size_t(opt.chunk), half) - 1;
      if (solved > hi) break;
      auto res = generalized_eigen_by_index(op.A, op.B, half + solved,
                                            half + hi, opt.solver_tol);
      EigenResult resf;
      if (opt.with_errors)
        resf = generalized_eigen_by_index(opf.A, opf.B, opf.dim() / 2 + solved,
                                          opf.dim() / 2 + hi, opt.solver_tol);
      for (std::size_t j = 0; j < res.values.size(); ++j) {
        const double v = opt.with_errors ? resf.values[j] : res.values[j];
        const double err =
            opt.with_errors ? std::abs(res.values[j] - resf.values[j]) / 3.0 : 0.0;
        raw.push_back({v, mult, tag, err, std::abs(v)});
        raw.push_back({-v, mult, tag, err, std::abs(v)});
        if (solved + j == 0) mode_lowest = std::abs(v);
      }
      solved = hi + 1;
      const double kth = detail::kth_key(raw, k);
      if (res.values.empty() || std::abs(res.values.back()) > kth) break;
      if (solved >= half) break;
    }
    const double kth = detail::kth_key(raw, k);
    if (!std::isfinite(kth)) continue;
    // certified stop: every remaining mode has |lambda| above the k-th value
    if (km + 1 < opt.max_modes) {
      const auto next = dirac_modes(p.dim, km + 1)[std::size_t(km + 1)];
      if (next.mu >= max_f1) {
        const double bound = dirac_mode_lower_bound(p, next.mu);
        if (bound > kth) {
          floor = bound;
          certified = true;
          stopped = true;
          break;
        }
      }
    }
    // empirical fallback
    if (mode_lowest > 1.5 * kth) {
      if (++high_streak >= 3) {
        floor = kth;
        certified = false;
        stopped = true;
        break;
      }
    } else {
      high_streak = 0;
    }
  }
  if (stopped && detail::kth_key(raw, k) > trust_cutoff)
    throw ResolutionError(
        "dirac spectrum: requested k reaches past the resolvable range; increase N");
  if (!stopped)
    throw ResolutionError("dirac spectrum: k not reachable; increase N or reduce k");
  sp.entries = detail::cluster_entries(std::move(raw), opt, true);
  sp.truncation_floor = floor;
  sp.floor_certified = certified;
  return sp;
}

/// Distinct eigenvalues of an assembled spectrum (entries are already
/// clustered), convenience view as (value, multiplicity).
inline std::vector<std::pair<double, std::int64_t>> distinct_values(
    const Spectrum& sp) {
  std::vector<std::pair<double, std::int64_t>> out;
  out.reserve(sp.entries.size());
  for (const auto& e : sp.entries) out.emplace_back(e.value, e.mult);
  return out;
}

struct ConvergenceEstimate {
  double value = 0.0;  // at the finest grid
  double err = 0.0;    // Richardson estimate |l_h - l_{h/2}| / 3
  double order = 0.0;  // observed convergence order
};

/// Solve the assembled spectrum at h, h/2, h/4 and Richardson-estimate the
/// error and observed order of the value_index-th distinct eigenvalue
/// (0-based, ordered by |value| for Dirac).
inline ConvergenceEstimate convergence_estimate(const ProfileGrid& p,
                                                SpectrumOperator which,
                                                std::size_t value_index,
                                                SpectrumOptions opt = {}) {
  // Richardson differences sit far below the norm-scaled default tolerance
  // on stiff grids; pin an absolute one.
  if (opt.solver_tol == 0.0) opt.solver_tol = 1e-11;
  auto value_at = [&](int refine) {
    ProfileGrid g = rebuild_profile(p, refine * p.refine);
    Spectrum sp;
    const std::int64_t k = std::int64_t(value_index) + 1;
    if (which == SpectrumOperator::Dirac) {
      sp = dirac_spectrum(g, 2 * k, opt);
    } else if (which == SpectrumOperator::Yamabe) {
      auto c = scalar_curvature_field(g);
      sp = yamabe_spectrum(g, c, k, opt);
    } else {
      sp = laplace_spectrum(g, k, opt);
    }
    if (which == SpectrumOperator::Dirac) {
      // distinct magnitudes
      std::vector<double> mags;
      for (const auto& e : sp.entries) {
        const double m = std::abs(e.value);
        if (mags.empty() || m > mags.back() + std::max(opt.cluster_atol,
                                                       opt.cluster_rtol * m))
          mags.push_back(m);
        if (mags.size() > value_index) break;
      }
      if (mags.size() <= value_index)
        throw ResolutionError("convergence estimate: index not reachable");
      return mags[value_index];
    }
    if (sp.entries.size() <= value_index)
      throw ResolutionError("convergence estimate: index not reachable");
    return sp.entries[value_index].value;
  };
  const double v1 = value_at(1), v2 = value_at(2), v4 = value_at(4);
  ConvergenceEstimate est;
  est.value = v4;
  est.err = std::abs(v2 - v4) / 3.0;
  const double d1 = std::abs(v1 - v2), d2 = std::abs(v2 - v4);
  est.order = (d1 > 0.0 && d2 > 0.0) ? std::log2(d1 / d2) : 0.0;
  return est;
}

}  // namespace spingeo
