#include "doctest.h"

#include <cmath>
#include <random>

#include "spingeo/conformal.hpp"

using namespace spingeo;

namespace {

// smooth radial function with u'(0) = u'(T) = 0, strictly positive
std::vector<double> cosine_series(const ProfileGrid& p, std::mt19937& rng) {
  std::uniform_real_distribution<double> amp(-0.05, 0.05);
  std::vector<double> coef(6);
  for (auto& a : coef) a = amp(rng);
  std::vector<double> u(p.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double v = 1.0;
    for (std::size_t q = 0; q < coef.size(); ++q)
      v += coef[q] * std::cos(double(q + 1) * kPi * p.t[i] / p.T);
    u[i] = v;
  }
  return u;
}

}  // namespace

TEST_SUITE("conformal") {

TEST_CASE("Y(1) = S pointwise, exactly at the finite-difference level") {
  auto g = build_round_profile(3, 1.0, 64);
  auto c = scalar_curvature_field(g);
  std::vector<double> ones(g.node_count(), 1.0);
  auto Yu = yamabe_apply(g, c, ones);
  for (std::size_t i = 0; i < Yu.size(); ++i)
    CHECK(Yu[i] == doctest::Approx(c.S[i]).epsilon(1e-12));
}

TEST_CASE("Y is linear: Y(c u) = c Y(u)") {
  auto g = build_round_profile(3, 1.0, 64);
  auto c = scalar_curvature_field(g);
  std::vector<double> u(g.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + 0.3 * std::cos(g.t[i]);
  auto Yu = yamabe_apply(g, c, u);
  std::vector<double> u3 = u;
  for (double& v : u3) v *= 3.0;
  auto Yu3 = yamabe_apply(g, c, u3);
  double scale = 0.0;
  for (double v : Yu) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < Yu.size(); ++i)
    CHECK(std::abs(Yu3[i] - 3.0 * Yu[i]) <= 1e-9 * scale);
}

TEST_CASE("round S^3: Y(cos t) = 30 cos t within discretization error") {
  auto g = build_round_profile(3, 1.0, 256);
  auto c = scalar_curvature_field(g);
  std::vector<double> u(g.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::cos(g.t[i]);
  auto Yu = yamabe_apply(g, c, u);
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    CHECK(std::abs(Yu[i] - 30.0 * u[i]) < 5e-3);
}

TEST_CASE("yamabe_apply rejects n = 2") {
  auto g = build_round_profile(2, 1.0, 32);
  auto c = scalar_curvature_field(g);
  std::vector<double> ones(g.node_count(), 1.0);
  CHECK_THROWS_AS(yamabe_apply(g, c, ones), SpecError);
}

TEST_CASE("u = 1 is the identity conformal change") {
  auto g = build_round_profile(3, 1.0, 128);
  auto c = scalar_curvature_field(g);
  auto q = global_quantities(g, c);
  std::vector<double> ones(g.node_count(), 1.0);
  auto rep = conformal_scalar_curvature(g, c, ones);
  for (std::size_t i = 0; i < rep.S1.size(); ++i)
    CHECK(rep.S1[i] == doctest::Approx(c.S[i]).epsilon(1e-10));
  CHECK(rep.total_S1_formula == doctest::Approx(q.total_S).epsilon(1e-10));
  CHECK(rep.vol1 == doctest::Approx(q.vol).epsilon(1e-10));
  // the literal quadrature route is exact to rounding for u = 1
  CHECK(std::abs(rep.total_S1_formula - rep.int_u_Yu) <=
        1e-12 * std::abs(rep.int_u_Yu));
  // the geometric route re-differentiates the profile, so its residual is
  // discretization-level rather than rounding-level
  CHECK(rep.identity_residual < 5e-5);
}

TEST_CASE("constant factor law: u = c rescales S1 and vol1 by the exact powers") {
  auto g = build_round_profile(3, 1.0, 128);
  auto c = scalar_curvature_field(g);
  auto q = global_quantities(g, c);
  std::vector<double> u(g.node_count(), 2.0);
  auto rep = conformal_scalar_curvature(g, c, u);
  // n = 3: S1 = c^{-4} S, dvol1 = c^6 dvol
  for (std::size_t i = 0; i < rep.S1.size(); ++i)
    CHECK(rep.S1[i] == doctest::Approx(c.S[i] / 16.0).epsilon(1e-10));
  CHECK(rep.vol1 == doctest::Approx(64.0 * q.vol).epsilon(1e-10));
  // total S1 = int u Y(u) = 4 * 6 * 2 pi^2 in closed form
  CHECK(rep.int_u_Yu == doctest::Approx(4.0 * 6.0 * 2.0 * kPi * kPi).epsilon(1e-8));
  CHECK(rep.total_S1 == doctest::Approx(4.0 * 6.0 * 2.0 * kPi * kPi).epsilon(1e-5));
  CHECK(rep.total_S1_formula ==
        doctest::Approx(4.0 * 6.0 * 2.0 * kPi * kPi).epsilon(1e-8));
}

TEST_CASE("nonpositive u is a domain error") {
  auto g = build_round_profile(3, 1.0, 32);
  auto c = scalar_curvature_field(g);
  std::vector<double> u(g.node_count(), 1.0);
  u[u.size() / 2] = 0.0;
  CHECK_THROWS_AS(conformal_scalar_curvature(g, c, u), SpecError);
}

TEST_CASE("identity residual is discretization-small for smooth u") {
  SUBCASE("u = 1 + 0.5 cos t on round S^3 at N = 4000") {
    auto g = build_round_profile(3, 1.0, 4000);
    auto c = scalar_curvature_field(g);
    std::vector<double> u(g.node_count());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + 0.5 * std::cos(g.t[i]);
    auto rep = conformal_scalar_curvature(g, c, u);
    CHECK(total_scalar_identity_check(rep) <= 1e-6);
  }
  SUBCASE("three random smooth positive u on round S^3 at N = 4000") {
    auto g = build_round_profile(3, 1.0, 4000);
    auto c = scalar_curvature_field(g);
    std::mt19937 rng(5);
    for (int trial = 0; trial < 3; ++trial) {
      auto u = cosine_series(g, rng);
      auto rep = conformal_scalar_curvature(g, c, u);
      CHECK(total_scalar_identity_check(rep) <= 1e-6);
    }
  }
  SUBCASE("residual shrinks by >= 3x under refinement (order check)") {
    auto res_at = [](int refine) {
      auto g = build_round_profile(3, 1.0, 250, refine);
      auto c = scalar_curvature_field(g);
      std::vector<double> u(g.node_count());
      for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = 1.0 + 0.4 * std::cos(g.t[i]) + 0.1 * std::cos(2.0 * g.t[i]);
      return conformal_scalar_curvature(g, c, u).identity_residual;
    };
    const double r1 = res_at(1), r2 = res_at(2);
    REQUIRE(r1 > 1e-12);
    CHECK(r1 / r2 >= 3.0);
  }
}

TEST_CASE("epsilon sweep on round S^3") {
  auto g = build_round_profile(3, 1.0, 512);
  auto c = scalar_curvature_field(g);
  const std::vector<double> eps = {1.0,  1e-1, 1e-2, 1e-3, 1e-4,
                                   1e-5, 1e-6, 1e-7, 1e-8};
  SUBCASE("j=0: constant eigenfunction gives exactly mu = 6 for every eps") {
    auto sweep = epsilon_unboundedness_sweep(g, c, 0, eps);
    CHECK(sweep.mu == doctest::Approx(6.0).epsilon(1e-4));
    for (const auto& row : sweep.rows)
      CHECK(row.normalized == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(sweep.residual < 1e-3);
  }
  SUBCASE("j=1 and j=2 converge to 30 and 70; limits increase in j") {
    auto s1 = epsilon_unboundedness_sweep(g, c, 1, eps);
    auto s2 = epsilon_unboundedness_sweep(g, c, 2, eps);
    CHECK(s1.mu == doctest::Approx(30.0).epsilon(1e-3));
    CHECK(s2.mu == doctest::Approx(70.0).epsilon(1e-3));
    CHECK(s1.extrapolated == doctest::Approx(30.0).epsilon(0.01));
    CHECK(s2.extrapolated == doctest::Approx(70.0).epsilon(0.01));
    CHECK(s2.extrapolated > s1.extrapolated);
    CHECK(s1.extrapolated > 6.0);
    // the integral converges to mu from below as eps -> 0
    CHECK(std::abs(s1.rows.back().normalized - 30.0) <
          std::abs(s1.rows.front().normalized - 30.0));
  }
}

TEST_CASE("epsilon sweep rejects nonpositive source eigenvalues") {
  auto g = build_round_profile(3, 1.0, 64);
  auto c = scalar_curvature_field(g);
  std::vector<double> u(g.node_count(), 1.0);
  CHECK_THROWS_AS(
      epsilon_unboundedness_sweep(g, c, -1.0, u, {1e-2, 1e-3}, 0),
      SpecError);
}

}  // TEST_SUITE
