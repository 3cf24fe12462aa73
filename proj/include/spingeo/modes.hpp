// Angular modes on the fiber S^{n-1}(1): spherical-harmonic Laplace
// eigenvalues and Dirac fiber eigenvalues, with multiplicities, plus the
// classical assembled round-sphere tables used as the master oracle.
#pragma once

#include <cstdint>
#include <vector>

#include "spingeo/common.hpp"

namespace spingeo {

/// Exact binomial coefficient, 0 when a < b or b < 0.
inline std::int64_t binomial(std::int64_t a, std::int64_t b) {
  if (b < 0 || a < b) return 0;
  b = std::min(b, a - b);
  std::int64_t num = 1, den = 1;
  for (std::int64_t i = 1; i <= b; ++i) {
    num *= a - b + i;
    den *= i;
    const std::int64_t g = [](std::int64_t x, std::int64_t y) {
      while (y) {
        const std::int64_t t = x % y;
        x = y;
        y = t;
      }
      return x;
    }(num, den);
    num /= g;
    den /= g;
  }
  return num / den;
}

struct LaplaceMode {
  int ell;
  double value;       // ell (ell + n - 2)
  std::int64_t mult;  // dim of degree-ell harmonics on S^{n-1}
};

struct DiracMode {
  int k;
  double mu;          // (n-1)/2 + k
  std::int64_t mult;  // 2^{floor((n-1)/2)} C(k+n-2, k), per fiber sign
};

inline std::vector<LaplaceMode> laplace_modes(int n, int ell_max) {
  if (n < 2) throw SpecError("laplace_modes: n must be >= 2");
  std::vector<LaplaceMode> out;
  out.reserve(std::size_t(ell_max) + 1);
  for (int ell = 0; ell <= ell_max; ++ell) {
    const std::int64_t mult =
        binomial(ell + n - 1, n - 1) - binomial(ell + n - 3, n - 1);
    out.push_back({ell, double(ell) * (ell + n - 2), mult});
  }
  return out;
}

inline std::vector<DiracMode> dirac_modes(int n, int k_max) {
  if (n < 2) throw SpecError("dirac_modes: n must be >= 2");
  std::vector<DiracMode> out;
  out.reserve(std::size_t(k_max) + 1);
  const std::int64_t rank = std::int64_t(1) << ((n - 1) / 2);
  for (int k = 0; k <= k_max; ++k)
    out.push_back({k, 0.5 * (n - 1) + k, rank * binomial(k + n - 2, k)});
  return out;
}

/// Number of reduced radial systems a Dirac mode spawns when spectra are
/// assembled. For even n the fiber eigenvalues +mu and -mu pair with the two
/// copies of the fiber spinor bundle and contribute separately (the two
/// systems have identical spectra); for odd n the pairing is internal.
inline std::int64_t dirac_mode_system_count(int n, const DiracMode& m) {
  return m.mult * (n % 2 == 0 ? 2 : 1);
}

// Classical round-sphere tables for S^n(1).

inline double round_laplace_value(int n, int m) {
  return double(m) * (m + n - 1);
}
inline std::int64_t round_laplace_mult(int n, int m) {
  return binomial(m + n, n) - binomial(m + n - 2, n);
}
inline double round_dirac_value(int n, int k) { return 0.5 * n + k; }
inline std::int64_t round_dirac_mult(int n, int k) {
  return (std::int64_t(1) << (n / 2)) * binomial(k + n - 1, k);
}

}  // namespace spingeo
