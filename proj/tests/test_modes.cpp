#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "spingeo/modes.hpp"

using namespace spingeo;

namespace {

// Brute-force dimension of harmonic homogeneous polynomials of degree ell in
// d variables: monomial count minus the rank of the Laplacian map into
// degree ell-2. Independent of the binomial closed form under test.
std::vector<std::vector<int>> monomials(int d, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(std::size_t(d), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == d - 1) {
      cur[std::size_t(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      cur[std::size_t(pos)] = a;
      self(self, pos + 1, left - a);
    }
  };
  if (deg >= 0) rec(rec, 0, deg);
  return out;
}

std::int64_t harmonic_dim_bruteforce(int d, int ell) {
  auto cols = monomials(d, ell);
  if (ell < 2) return std::int64_t(cols.size());
  auto rows = monomials(d, ell - 2);
  std::map<std::vector<int>, std::size_t> row_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;
  std::vector<std::vector<double>> M(rows.size(),
                                     std::vector<double>(cols.size(), 0.0));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (int i = 0; i < d; ++i) {
      const int a = cols[j][std::size_t(i)];
      if (a >= 2) {
        auto target = cols[j];
        target[std::size_t(i)] -= 2;
        M[row_index[target]][j] += double(a) * (a - 1);
      }
    }
  }
  // rank by Gaussian elimination with partial pivoting
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols.size() && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) < 1e-9) continue;
    std::swap(M[piv], M[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      const double m = M[r][col] / M[rank][col];
      for (std::size_t c = col; c < cols.size(); ++c) M[r][c] -= m * M[rank][c];
    }
    ++rank;
  }
  return std::int64_t(cols.size()) - std::int64_t(rank);
}

}  // namespace

TEST_SUITE("modes") {

TEST_CASE("laplace modes on S^2 fiber (n=3): values l(l+1), mult 2l+1") {
  auto modes = laplace_modes(3, 6);
  for (const auto& m : modes) {
    CHECK(m.value == double(m.ell) * (m.ell + 1));
    CHECK(m.mult == 2 * m.ell + 1);
  }
}

TEST_CASE("laplace mode l=0 is the constant: value 0, mult 1") {
  for (int n : {2, 3, 4, 7}) {
    auto modes = laplace_modes(n, 0);
    CHECK(modes[0].value == 0.0);
    CHECK(modes[0].mult == 1);
  }
}

TEST_CASE("laplace modes on S^3 fiber (n=4): mult (l+1)^2, cross-checked by brute force") {
  auto modes = laplace_modes(4, 4);
  for (const auto& m : modes) {
    CHECK(m.mult == std::int64_t(m.ell + 1) * (m.ell + 1));
    CHECK(m.mult == harmonic_dim_bruteforce(4, m.ell));
  }
}

TEST_CASE("laplace mode values strictly increase and mults are positive") {
  for (int n : {2, 3, 5}) {
    auto modes = laplace_modes(n, 8);
    for (std::size_t i = 0; i < modes.size(); ++i) {
      CHECK(modes[i].mult >= 1);
      if (i > 0) CHECK(modes[i].value > modes[i - 1].value);
    }
  }
}

TEST_CASE("dirac modes on S^2 fiber (n=3): mu = 1+k, mult 2(k+1)") {
  auto modes = dirac_modes(3, 5);
  for (const auto& m : modes) {
    CHECK(m.mu == double(1 + m.k));
    CHECK(m.mult == 2 * (m.k + 1));
  }
}

TEST_CASE("dirac modes for n=2 (bounding structure on S^1): mu = 1/2 + k, mult 1") {
  auto modes = dirac_modes(2, 4);
  for (const auto& m : modes) {
    CHECK(m.mu == 0.5 + m.k);
    CHECK(m.mult == 1);
  }
  // both fiber signs contribute when spectra are assembled
  CHECK(dirac_mode_system_count(2, modes[0]) == 2);
}

TEST_CASE("dirac mode k=0 for n=5: mu = 2, mult = 4") {
  auto modes = dirac_modes(5, 0);
  CHECK(modes[0].mu == 2.0);
  CHECK(modes[0].mult == 4);
  CHECK(dirac_mode_system_count(5, modes[0]) == 4);
}

TEST_CASE("assembled multiplicity identity: mode sums match the round tables") {
  // Laplace: sum_{l<=m} mult_l = C(m+n, n) - C(m+n-2, n).
  for (int n : {2, 3, 4, 5}) {
    auto lm = laplace_modes(n, 9);
    std::int64_t acc = 0;
    for (int m = 0; m <= 9; ++m) {
      acc += lm[std::size_t(m)].mult;
      CHECK(acc == round_laplace_mult(n, m));
    }
  }
  // Dirac: sum_{k<=m} system_count_k = 2^{floor(n/2)} C(m+n-1, m).
  for (int n : {2, 3, 4, 5}) {
    auto dm = dirac_modes(n, 9);
    std::int64_t acc = 0;
    for (int m = 0; m <= 9; ++m) {
      acc += dirac_mode_system_count(n, dm[std::size_t(m)]);
      CHECK(acc == round_dirac_mult(n, m));
    }
  }
}

TEST_CASE("round S^3 tables: laplace mult (m+1)^2, dirac mult (k+1)(k+2)") {
  for (int m = 0; m <= 6; ++m) {
    CHECK(round_laplace_value(3, m) == double(m) * (m + 2));
    CHECK(round_laplace_mult(3, m) == std::int64_t(m + 1) * (m + 1));
  }
  for (int k = 0; k <= 6; ++k) {
    CHECK(round_dirac_value(3, k) == 1.5 + k);
    CHECK(round_dirac_mult(3, k) == std::int64_t(k + 1) * (k + 2));
  }
}

}  // TEST_SUITE
