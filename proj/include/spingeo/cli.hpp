// Experiment runner binding every module: reproduces the refutation
// certificates, the (r, L) sweeps, the round-sphere oracle checks, and the
// conformal experiments, emitting deterministic CSV/JSON artifacts.
//
// Exit codes: 0 results computed, 1 configuration error, 2 theorem-level
// invariant violation, 3 resolution insufficient.
#pragma once

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spingeo/common.hpp"
#include "spingeo/conformal.hpp"
#include "spingeo/geometry.hpp"
#include "spingeo/inequalities.hpp"
#include "spingeo/io.hpp"
#include "spingeo/modes.hpp"
#include "spingeo/parallel.hpp"
#include "spingeo/profile.hpp"
#include "spingeo/spectra.hpp"

namespace spingeo {

struct ExperimentConfig {
  int n = 3;
  double r = 0.1;
  double L = 10.0;
  int N = 200;
  int k = 6;
  double t_body = 2.0;
  double w_taper = 1.0;
  double w_blend = -1.0;
  double R = 1.0;        // round-sphere radius for --round / oracle
  bool round = false;    // operate on the round sphere instead of a pinocchio
  std::string op = "dirac";  // spectrum operator: dirac | laplace | yamabe
  int j = 2;                 // highest conformal mode index
  std::vector<double> eps = {1.0,  1e-1, 1e-2, 1e-3, 1e-4,
                             1e-5, 1e-6, 1e-7, 1e-8};
  std::vector<double> r_list = {0.05, 0.1, 0.5};
  std::vector<double> L_list = {1.0, 10.0, 100.0};
  std::string out;       // output prefix; empty -> command name
  double tol = 1e-6;
  double solver_tol = 0.0;
  int jobs = 0;

  json to_json() const {
    json cfg;
    cfg["n"] = n;
    cfg["r"] = r;
    cfg["L"] = L;
    cfg["N"] = N;
    cfg["k"] = k;
    cfg["t_body"] = t_body;
    cfg["w_taper"] = w_taper;
    cfg["w_blend"] = w_blend;
    cfg["R"] = R;
    cfg["round"] = round;
    cfg["op"] = op;
    cfg["j"] = j;
    cfg["eps"] = eps;
    cfg["r_list"] = r_list;
    cfg["L_list"] = L_list;
    cfg["out"] = out;
    cfg["tol"] = tol;
    cfg["solver_tol"] = solver_tol;
    cfg["jobs"] = jobs;
    return cfg;
  }

  static ExperimentConfig from_json(const json& cfg) {
    ExperimentConfig c;
    c.n = cfg.value("n", c.n);
    c.r = cfg.value("r", c.r);
    c.L = cfg.value("L", c.L);
    c.N = cfg.value("N", c.N);
    c.k = cfg.value("k", c.k);
    c.t_body = cfg.value("t_body", c.t_body);
    c.w_taper = cfg.value("w_taper", c.w_taper);
    c.w_blend = cfg.value("w_blend", c.w_blend);
    c.R = cfg.value("R", c.R);
    c.round = cfg.value("round", c.round);
    c.op = cfg.value("op", c.op);
    c.j = cfg.value("j", c.j);
    c.eps = cfg.value("eps", c.eps);
    c.r_list = cfg.value("r_list", c.r_list);
    c.L_list = cfg.value("L_list", c.L_list);
    c.out = cfg.value("out", c.out);
    c.tol = cfg.value("tol", c.tol);
    c.solver_tol = cfg.value("solver_tol", c.solver_tol);
    c.jobs = cfg.value("jobs", c.jobs);
    return c;
  }
};

namespace detail {

inline ProfileSpec to_profile_spec(const ExperimentConfig& cfg) {
  ProfileSpec spec;
  spec.n = cfg.n;
  spec.r = cfg.r;
  spec.L = cfg.L;
  spec.t_body = cfg.t_body;
  spec.w_taper = cfg.w_taper;
  spec.w_blend = cfg.w_blend;
  spec.N = cfg.N;
  return spec;
}

inline ProfileGrid make_profile(const ExperimentConfig& cfg) {
  return cfg.round ? build_round_profile(cfg.n, cfg.R, cfg.N)
                   : build_pinocchio_profile(to_profile_spec(cfg));
}

inline json base_meta(const ExperimentConfig& cfg) {
  json meta;
  meta["schema_version"] = 1;
  meta["n"] = cfg.n;
  if (cfg.round) {
    meta["round"] = true;
    meta["R"] = cfg.R;
  } else {
    meta["r"] = cfg.r;
    meta["L"] = cfg.L;
  }
  meta["N"] = cfg.N;
  return meta;
}

}  // namespace detail

inline int run_spectrum(const ExperimentConfig& cfg, const std::string& out,
                        std::ostream& log) {
  auto p = detail::make_profile(cfg);
  SpectrumOptions opt;
  opt.solver_tol = cfg.solver_tol;
  opt.with_errors = true;
  Spectrum sp;
  if (cfg.op == "dirac") {
    sp = dirac_spectrum(p, cfg.k, opt);
  } else if (cfg.op == "laplace") {
    sp = laplace_spectrum(p, cfg.k, opt);
  } else if (cfg.op == "yamabe") {
    auto c = scalar_curvature_field(p);
    sp = yamabe_spectrum(p, c, cfg.k, opt);
  } else {
    throw SpecError("spectrum: unknown operator '" + cfg.op + "'");
  }
  CsvWriter csv;
  csv.header({"value", "multiplicity", "operator", "mode", "err"});
  for (const auto& e : sp.entries)
    csv.line({fmt_full(e.value), std::to_string(e.mult), operator_name(sp.op),
              e.mode, fmt_full(e.err)});
  write_text_file(out + "_spectrum.csv", csv.body);
  json meta = detail::base_meta(cfg);
  meta["operator"] = operator_name(sp.op);
  meta["k"] = cfg.k;
  meta["truncation_floor"] = sp.truncation_floor;
  meta["floor_certified"] = sp.floor_certified;
  meta["entries"] = sp.entries.size();
  write_json_file(out + ".json", meta);
  char line[160];
  std::snprintf(line, sizeof line,
                "spectrum %s: %zu entries, floor %.6g (%s)\n",
                operator_name(sp.op), sp.entries.size(), sp.truncation_floor,
                sp.floor_certified ? "certified" : "empirical");
  log << line;
  return 0;
}

inline int run_curvature(const ExperimentConfig& cfg, const std::string& out,
                         std::ostream& log) {
  auto p = detail::make_profile(cfg);
  auto c = scalar_curvature_field(p);
  auto q = global_quantities(p, c);
  {
    std::ostringstream os;
    write_profile_csv(p, os);
    write_text_file(out + "_profile.csv", os.str());
  }
  CsvWriter csv;
  csv.header({"t", "S", "f_pow"});
  for (std::size_t i = 0; i < p.node_count(); ++i)
    csv.line({fmt_full(p.t[i]), fmt_full(c.S[i]),
              fmt_full(std::pow(p.f[i], cfg.n - 1))});
  write_text_file(out + "_curvature.csv", csv.body);
  json meta = detail::base_meta(cfg);
  meta["vol"] = q.vol;
  meta["total_S"] = q.total_S;
  meta["ratio"] = q.ratio;
  meta["conjectured_bound"] = conjectured_bound(q, cfg.n);
  meta["S_min"] = c.S_min;
  write_json_file(out + ".json", meta);
  char line[200];
  std::snprintf(line, sizeof line,
                "curvature: vol %.6g, total_S %.6g, ratio %.6g, bound %.6g\n",
                q.vol, q.total_S, q.ratio, conjectured_bound(q, cfg.n));
  log << line;
  return 0;
}

inline int run_bounds(const ExperimentConfig& cfg, const std::string& out,
                      std::ostream& log) {
  auto p = detail::make_profile(cfg);
  auto c = scalar_curvature_field(p);
  auto q = global_quantities(p, c);
  SpectrumOptions opt;
  opt.solver_tol = cfg.solver_tol;
  opt.with_errors = true;
  auto sp = dirac_spectrum(p, 2, opt);
  const double mu1 = cfg.n >= 3 ? yamabe_mu1(p, c, cfg.solver_tol) : 0.0;
  auto rep = evaluate_bounds(p, c, q, sp, mu1, cfg.tol);
  json meta = detail::base_meta(cfg);
  meta["lambda1_sq"] = rep.lambda1_sq;
  meta["err_lambda1_sq"] = rep.err_lambda1_sq;
  meta["lichnerowicz_rhs"] = rep.lichnerowicz_rhs;
  meta["friedrich_rhs"] = rep.friedrich_rhs;
  meta["hijazi_rhs"] = rep.hijazi_rhs;
  meta["mu1"] = rep.mu1;
  meta["baer_rhs"] = rep.baer_rhs;
  meta["conjecture_rhs"] = rep.conjecture_rhs;
  meta["slack_lichnerowicz"] = rep.slack_lichnerowicz;
  meta["slack_friedrich"] = rep.slack_friedrich;
  meta["slack_hijazi"] = rep.slack_hijazi;
  meta["slack_baer"] = rep.slack_baer;
  meta["slack_conjecture"] = rep.slack_conjecture;
  write_json_file(out + ".json", meta);
  char line[200];
  std::snprintf(line, sizeof line,
                "bounds: lambda1^2 %.6g | lich %.6g friedrich %.6g hijazi %.6g "
                "conjecture %.6g\n",
                rep.lambda1_sq, rep.lichnerowicz_rhs, rep.friedrich_rhs,
                rep.hijazi_rhs, rep.conjecture_rhs);
  log << line;
  return 0;
}

inline int run_certificate(const ExperimentConfig& cfg, const std::string& out,
                           std::ostream& log) {
  auto cert = counterexample_certificate(detail::to_profile_spec(cfg),
                                         cfg.solver_tol);
  json meta;
  meta["schema_version"] = 1;
  meta["n"] = cert.n;
  meta["r"] = cert.r;
  meta["L"] = cert.L;
  meta["N"] = cert.N;
  meta["lambda1_sq"] = cert.lambda1_sq;
  meta["err_lambda"] = cert.err_lambda;
  meta["conjecture_rhs"] = cert.conjecture_rhs;
  meta["err_rhs"] = cert.err_rhs;
  meta["cap_C1"] = cert.cap_C1;
  meta["margin"] = cert.margin;
  meta["verdict"] = cert.refuted ? "REFUTED" : "NOT_REFUTED";
  write_json_file(out + ".json", meta);
  char line[200];
  std::snprintf(line, sizeof line,
                "certificate n=%d r=%g L=%g: verdict %s, margin %.6g "
                "(budget %.3g)\n",
                cert.n, cert.r, cert.L,
                cert.refuted ? "REFUTED" : "NOT_REFUTED", cert.margin,
                cert.err_lambda + cert.err_rhs);
  log << line;
  return 0;
}

inline int run_sweep(const ExperimentConfig& cfg, const std::string& out,
                     std::ostream& log) {
  // cells are independent jobs; results land in fixed slots
  const std::size_t nr = cfg.r_list.size(), nL = cfg.L_list.size();
  SweepTable table;
  table.n = cfg.n;
  table.N = cfg.N;
  table.cells.resize(nr * nL);
  std::vector<std::vector<double>> caps(nr * nL);
  parallel_for(nr * nL, cfg.jobs, [&](std::size_t idx) {
    const double r = cfg.r_list[idx / nL];
    const double L = cfg.L_list[idx % nL];
    auto sub = sweep({r}, {L}, cfg.n, cfg.N, cfg.solver_tol);
    table.cells[idx] = sub.cells.front();
    caps[idx] = sub.cap_values;
  });
  for (std::size_t idx = 0; idx < caps.size(); ++idx) {
    if (caps[idx].empty()) continue;
    if (table.cap_values.empty())
      table.cap_values = caps[idx];
    else if (caps[idx] != table.cap_values)
      table.cells[idx].status = "cap-not-invariant";
  }
  CsvWriter csv;
  csv.header({"r", "L", "ratio", "conjecture_rhs", "lambda1_sq", "err_lambda",
              "cap_C1", "margin", "cap_ok", "slack_lichnerowicz",
              "slack_friedrich", "slack_hijazi", "verdict", "status"});
  bool violation = false;
  for (const auto& cell : table.cells) {
    csv.line({fmt_full(cell.r), fmt_full(cell.L), fmt_full(cell.ratio),
              fmt_full(cell.conjecture_rhs), fmt_full(cell.lambda1_sq),
              fmt_full(cell.err_lambda), fmt_full(cell.cap_C1),
              fmt_full(cell.margin), cell.cap_ok ? "1" : "0",
              fmt_full(cell.slack_lichnerowicz), fmt_full(cell.slack_friedrich),
              fmt_full(cell.slack_hijazi),
              cell.refuted ? "REFUTED" : "NOT_REFUTED", cell.status});
    if (cell.status != "ok" || !cell.cap_ok ||
        cell.slack_friedrich < -cfg.tol || cell.slack_hijazi < -cfg.tol ||
        cell.slack_lichnerowicz < -cfg.tol)
      violation = true;
  }
  write_text_file(out + "_sweep.csv", csv.body);
  json meta = detail::base_meta(cfg);
  meta.erase("r");
  meta.erase("L");
  meta["r_list"] = cfg.r_list;
  meta["L_list"] = cfg.L_list;
  meta["cap_values"] = table.cap_values;
  meta["cells"] = table.cells.size();
  write_json_file(out + ".json", meta);
  char line[120];
  std::snprintf(line, sizeof line, "sweep: %zu cells, invariants %s\n",
                table.cells.size(), violation ? "VIOLATED" : "ok");
  log << line;
  return violation ? 2 : 0;
}

inline int run_conformal(const ExperimentConfig& cfg, const std::string& out,
                         std::ostream& log) {
  auto p = detail::make_profile(cfg);
  auto c = scalar_curvature_field(p);
  // identity check on a fixed smooth positive factor
  std::vector<double> u(p.node_count());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = 1.0 + 0.5 * std::cos(kPi * p.t[i] / p.T);
  auto rep = conformal_scalar_curvature(p, c, u);

  std::vector<EpsilonSweep> sweeps(std::size_t(cfg.j) + 1);
  parallel_for(sweeps.size(), cfg.jobs, [&](std::size_t jj) {
    sweeps[jj] =
        epsilon_unboundedness_sweep(p, c, int(jj), cfg.eps, cfg.solver_tol);
  });

  CsvWriter csv;
  csv.header({"j", "eps", "integral", "normalized"});
  for (const auto& sw : sweeps)
    for (const auto& row : sw.rows)
      csv.line({std::to_string(sw.mode_index), fmt_full(row.eps),
                fmt_full(row.integral), fmt_full(row.normalized)});
  write_text_file(out + "_eps.csv", csv.body);

  json meta = detail::base_meta(cfg);
  meta["identity_residual"] = rep.identity_residual;
  meta["total_S1"] = rep.total_S1;
  meta["int_u_Yu"] = rep.int_u_Yu;
  json modes = json::array();
  for (const auto& sw : sweeps) {
    json m;
    m["j"] = sw.mode_index;
    m["mu_j"] = sw.mu;
    m["extrapolated_limit"] = sw.extrapolated;
    m["residual"] = sw.residual;
    modes.push_back(m);
  }
  meta["modes"] = modes;
  write_json_file(out + ".json", meta);
  char line[160];
  std::snprintf(line, sizeof line,
                "conformal: identity residual %.3g, mu_0..mu_%d limits "
                "recovered to %.3g\n",
                rep.identity_residual, cfg.j,
                sweeps.back().residual / std::max(1.0, sweeps.back().mu));
  log << line;
  return 0;
}

inline int run_oracle(const ExperimentConfig& cfg, const std::string& out,
                      std::ostream& log) {
  auto g = build_round_profile(cfg.n, 1.0, cfg.N);
  SpectrumOptions opt;
  opt.solver_tol = cfg.solver_tol;
  const double tol = cfg.tol > 0.0 && cfg.tol != 1e-6 ? cfg.tol : 1e-3;
  double worst_rel = 0.0;
  bool mult_ok = true;

  const int distinct = std::max(2, std::min(cfg.k, 10));
  std::int64_t k_lap = 0;
  for (int m = 0; m < distinct; ++m) k_lap += round_laplace_mult(cfg.n, m);
  auto lap = laplace_spectrum(g, k_lap, opt);
  for (int m = 0; m < distinct; ++m) {
    const double exact = round_laplace_value(cfg.n, m);
    const double got = lap.entries[std::size_t(m)].value;
    const double rel = std::abs(got - exact) / std::max(1.0, exact);
    worst_rel = std::max(worst_rel, rel);
    if (lap.entries[std::size_t(m)].mult != round_laplace_mult(cfg.n, m))
      mult_ok = false;
  }

  const int kd = std::max(2, std::min(cfg.k, 6));
  std::int64_t k_dir = 0;
  for (int m = 0; m < kd; ++m) k_dir += 2 * round_dirac_mult(cfg.n, m);
  auto dir = dirac_spectrum(g, k_dir, opt);
  std::size_t idx = 0;
  for (int m = 0; m < kd; ++m) {
    const double exact = round_dirac_value(cfg.n, m);
    for (int sign = 0; sign < 2; ++sign, ++idx) {
      if (idx >= dir.entries.size()) {
        mult_ok = false;
        break;
      }
      const double got = std::abs(dir.entries[idx].value);
      worst_rel = std::max(worst_rel, std::abs(got - exact) / exact);
      if (dir.entries[idx].mult != round_dirac_mult(cfg.n, m)) mult_ok = false;
    }
  }

  const bool pass = worst_rel <= tol && mult_ok;
  json meta;
  meta["schema_version"] = 1;
  meta["n"] = cfg.n;
  meta["N"] = cfg.N;
  meta["max_rel_error"] = worst_rel;
  meta["multiplicities_exact"] = mult_ok;
  meta["pass"] = pass;
  write_json_file(out + ".json", meta);
  char line[160];
  std::snprintf(line, sizeof line,
                "oracle n=%d N=%d: %s (max rel err %.3g, multiplicities %s)\n",
                cfg.n, cfg.N, pass ? "PASS" : "FAIL", worst_rel,
                mult_ok ? "exact" : "WRONG");
  log << line;
  return pass ? 0 : 2;
}

/// Dispatch a subcommand; returns the process exit code.
inline int run(const std::string& command, const ExperimentConfig& cfg,
               std::ostream& log = std::cout) {
  const std::string out = cfg.out.empty() ? command : cfg.out;
  try {
    if (command == "spectrum") return run_spectrum(cfg, out, log);
    if (command == "curvature") return run_curvature(cfg, out, log);
    if (command == "bounds") return run_bounds(cfg, out, log);
    if (command == "certificate") return run_certificate(cfg, out, log);
    if (command == "sweep") return run_sweep(cfg, out, log);
    if (command == "conformal") return run_conformal(cfg, out, log);
    if (command == "oracle") return run_oracle(cfg, out, log);
    log << "unknown command: " << command << "\n";
    return 1;
  } catch (const TheoremViolationError& e) {
    log << "theorem violation: " << e.what() << "\n";
    return 2;
  } catch (const ResolutionError& e) {
    log << "resolution insufficient: " << e.what() << "\n";
    return 3;
  } catch (const SpecError& e) {
    log << "configuration error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace spingeo
