// spingeo command line: spectra, curvature, eigenvalue bounds, refutation
// certificates, (r, L) sweeps, conformal experiments, and round-sphere
// oracle checks for warped sphere metrics.
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spingeo/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spingeo: Dirac/Laplace/Yamabe spectra of warped sphere metrics"};
  app.require_subcommand(1);

  spingeo::ExperimentConfig cfg;
  std::string config_path;
  std::string command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->add_option("--n", cfg.n, "sphere dimension");
    sub->add_option("--r", cfg.r, "neck radius");
    sub->add_option("--L", cfg.L, "neck length");
    sub->add_option("--N", cfg.N, "grid cells per unit length");
    sub->add_option("--k", cfg.k, "eigenvalue count");
    sub->add_option("--t-body", cfg.t_body, "body extent");
    sub->add_option("--w-taper", cfg.w_taper, "taper width");
    sub->add_option("--w-blend", cfg.w_blend, "neck/nose blend width (<0: 0.1 r)");
    sub->add_option("--R", cfg.R, "round-sphere radius");
    sub->add_flag("--round", cfg.round, "use the round sphere S^n(R)");
    sub->add_option("--op", cfg.op, "spectrum operator: dirac|laplace|yamabe");
    sub->add_option("--j", cfg.j, "highest conformal mode index");
    sub->add_option("--eps", cfg.eps, "epsilon list for the conformal sweep")
        ->delimiter(',');
    sub->add_option("--r-list", cfg.r_list, "sweep radii")->delimiter(',');
    sub->add_option("--L-list", cfg.L_list, "sweep lengths")->delimiter(',');
    sub->add_option("--out", cfg.out, "output path prefix");
    sub->add_option("--tol", cfg.tol, "verdict/diagnostic tolerance");
    sub->add_option("--solver-tol", cfg.solver_tol, "eigensolver tolerance");
    sub->add_option("--jobs", cfg.jobs, "worker count (or SPINGEO_JOBS)");
    sub->callback([&, sub] { command = sub->get_name(); });
  };

  for (const char* name : {"spectrum", "curvature", "bounds", "certificate",
                           "sweep", "conformal", "oracle"})
    add_common(app.add_subcommand(name));

  // two-pass parse so that a config file provides defaults and explicit
  // flags win
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "cannot read config file: " << config_path << "\n";
      return 1;
    }
    spingeo::json file_cfg;
    try {
      is >> file_cfg;
    } catch (const std::exception& e) {
      std::cerr << "config parse error: " << e.what() << "\n";
      return 1;
    }
    cfg = spingeo::ExperimentConfig::from_json(file_cfg);
    try {
      app.clear();
      app.parse(argc, argv);  // flags override file values
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }
  }
  return spingeo::run(command, cfg);
}
