#include "doctest.h"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "spingeo/cli.hpp"
#include "spingeo/parallel.hpp"

using namespace spingeo;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string tmp_prefix(const char* tag) {
  return std::string("cli_test_") + tag;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config round-trips through JSON exactly") {
  ExperimentConfig cfg;
  cfg.n = 4;
  cfg.r = 0.123456789;
  cfg.L = 42.5;
  cfg.N = 77;
  cfg.eps = {1.0, 0.25};
  cfg.r_list = {0.3};
  cfg.L_list = {2.0, 4.0};
  cfg.op = "laplace";
  cfg.out = "somewhere";
  cfg.jobs = 3;
  auto back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("oracle command passes on round S^3 at modest resolution") {
  ExperimentConfig cfg;
  cfg.n = 3;
  cfg.N = 300;
  cfg.k = 4;
  cfg.out = tmp_prefix("oracle");
  std::ostringstream log;
  CHECK(run("oracle", cfg, log) == 0);
  CHECK(log.str().find("PASS") != std::string::npos);
  auto meta = json::parse(slurp(cfg.out + ".json"));
  CHECK(meta["pass"].get<bool>());
  CHECK(meta["max_rel_error"].get<double>() <= 1e-3);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
  ExperimentConfig cfg;
  cfg.n = 3;
  cfg.r = 0.2;
  cfg.L = 3.0;
  cfg.N = 24;
  cfg.k = 4;
  cfg.op = "dirac";
  std::ostringstream log;
  cfg.out = tmp_prefix("det_a");
  REQUIRE(run("spectrum", cfg, log) == 0);
  cfg.out = tmp_prefix("det_b");
  REQUIRE(run("spectrum", cfg, log) == 0);
  CHECK(slurp(tmp_prefix("det_a") + "_spectrum.csv") ==
        slurp(tmp_prefix("det_b") + "_spectrum.csv"));
  auto ja = json::parse(slurp(tmp_prefix("det_a") + ".json"));
  auto jb = json::parse(slurp(tmp_prefix("det_b") + ".json"));
  CHECK(ja == jb);
}

TEST_CASE("empty sweep grid yields a header-only CSV") {
  ExperimentConfig cfg;
  cfg.r_list.clear();
  cfg.L_list = {1.0};
  cfg.out = tmp_prefix("empty_sweep");
  std::ostringstream log;
  CHECK(run("sweep", cfg, log) == 0);
  const std::string csv = slurp(cfg.out + "_sweep.csv");
  CHECK(csv.rfind("r,L,ratio,", 0) == 0);
  CHECK(csv.find('\n') == csv.size() - 1);  // single header line
}

TEST_CASE("certificate JSON conforms to the documented schema") {
  ExperimentConfig cfg;
  cfg.n = 3;
  cfg.r = 0.1;
  cfg.L = 20.0;
  cfg.N = 20;
  cfg.out = tmp_prefix("cert");
  std::ostringstream log;
  REQUIRE(run("certificate", cfg, log) == 0);
  auto meta = json::parse(slurp(cfg.out + ".json"));
  for (const char* key : {"n", "r", "L", "N", "lambda1_sq", "err_lambda",
                          "conjecture_rhs", "err_rhs", "cap_C1", "margin",
                          "verdict"})
    CHECK(meta.contains(key));
  CHECK(meta["n"].is_number_integer());
  CHECK(meta["lambda1_sq"].is_number());
  CHECK(meta["verdict"].is_string());
  const std::string verdict = meta["verdict"].get<std::string>();
  CHECK((verdict == "REFUTED" || verdict == "NOT_REFUTED"));
  CHECK(verdict == "REFUTED");
}

TEST_CASE("resolution failures surface as exit code 3") {
  ExperimentConfig cfg;
  cfg.n = 3;
  cfg.round = true;
  cfg.N = 16;
  cfg.k = 100000;
  cfg.op = "laplace";
  cfg.out = tmp_prefix("res");
  std::ostringstream log;
  CHECK(run("spectrum", cfg, log) == 3);
}

TEST_CASE("configuration errors surface as exit code 1") {
  ExperimentConfig cfg;
  cfg.r = 2.0;  // invalid neck radius
  cfg.out = tmp_prefix("bad");
  std::ostringstream log;
  CHECK(run("curvature", cfg, log) == 1);
  CHECK(run("nosuchcommand", cfg, log) == 1);
}

TEST_CASE("curvature artifacts carry the documented summary fields") {
  ExperimentConfig cfg;
  cfg.n = 3;
  cfg.r = 0.1;
  cfg.L = 5.0;
  cfg.N = 24;
  cfg.out = tmp_prefix("curv");
  std::ostringstream log;
  REQUIRE(run("curvature", cfg, log) == 0);
  auto meta = json::parse(slurp(cfg.out + ".json"));
  for (const char* key :
       {"schema_version", "n", "r", "L", "N", "vol", "total_S", "ratio",
        "conjectured_bound", "S_min"})
    CHECK(meta.contains(key));
  const std::string csv = slurp(cfg.out + "_curvature.csv");
  CHECK(csv.rfind("t,S,f_pow", 0) == 0);
}

TEST_CASE("worker pool: deterministic slots, exceptions propagate") {
  std::vector<int> result(64, 0);
  parallel_for(64, 4, [&](std::size_t i) { result[i] = int(i) * 3; });
  for (std::size_t i = 0; i < result.size(); ++i) CHECK(result[i] == int(i) * 3);
  std::atomic<int> ran{0};
  CHECK_THROWS_AS(parallel_for(8, 2,
                               [&](std::size_t i) {
                                 ran++;
                                 if (i == 5) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  CHECK(ran.load() == 8);
}

}  // TEST_SUITE
