// Self-contained symmetric eigenvalue kernel for banded matrices:
// Givens band-to-tridiagonal reduction, Sturm-sequence bisection, and
// lowest-k extraction for generalized problems with positive diagonal weight.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

#include "spingeo/common.hpp"

namespace spingeo {

/// Symmetric banded matrix, bandwidth <= 2. Only the lower bands are stored.
struct BandMatrix {
  std::size_t n = 0;
  int bandwidth = 0;  // 0 diagonal, 1 tridiagonal, 2 pentadiagonal
  std::vector<double> diag;  // size n
  std::vector<double> sub1;  // size n-1 when bandwidth >= 1
  std::vector<double> sub2;  // size n-2 when bandwidth == 2

  static BandMatrix zeros(std::size_t n, int bw) {
    BandMatrix m;
    m.n = n;
    m.bandwidth = bw;
    m.diag.assign(n, 0.0);
    if (bw >= 1 && n >= 1) m.sub1.assign(n > 0 ? n - 1 : 0, 0.0);
    if (bw >= 2 && n >= 2) m.sub2.assign(n - 2, 0.0);
    return m;
  }

  double at(std::size_t i, std::size_t j) const {
    const std::size_t lo = std::min(i, j), hi = std::max(i, j);
    const std::size_t d = hi - lo;
    if (d == 0) return diag[lo];
    if (d == 1 && bandwidth >= 1) return sub1[lo];
    if (d == 2 && bandwidth >= 2) return sub2[lo];
    return 0.0;
  }

  void matvec(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) y[i] = diag[i] * x[i];
    if (bandwidth >= 1)
      for (std::size_t i = 0; i + 1 < n; ++i) {
        y[i] += sub1[i] * x[i + 1];
        y[i + 1] += sub1[i] * x[i];
      }
    if (bandwidth >= 2)
      for (std::size_t i = 0; i + 2 < n; ++i) {
        y[i] += sub2[i] * x[i + 2];
        y[i + 2] += sub2[i] * x[i];
      }
  }

  double inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = std::abs(diag[i]);
      if (bandwidth >= 1) {
        if (i + 1 < n) row += std::abs(sub1[i]);
        if (i >= 1) row += std::abs(sub1[i - 1]);
      }
      if (bandwidth >= 2) {
        if (i + 2 < n) row += std::abs(sub2[i]);
        if (i >= 2) row += std::abs(sub2[i - 2]);
      }
      best = std::max(best, row);
    }
    return best;
  }

  /// Coordinate text dump (row, col, value), lower triangle, for debugging.
  void write_coo(std::ostream& os) const;
};

struct Tridiagonal {
  std::vector<double> diag;  // size n
  std::vector<double> off;   // size n-1
  std::size_t size() const { return diag.size(); }
};

struct GivensRotation {
  std::size_t plane;  // acts on rows/cols (plane, plane+1)
  double c, s;
};

struct TridiagonalReduction {
  Tridiagonal T;
  std::vector<GivensRotation> rotations;  // in application order
  double orthogonality_certificate = 0.0; // max |c^2+s^2-1| over rotations
};

/// Reduce a symmetric band matrix (bandwidth <= 2) to tridiagonal form by
/// Givens rotations with bulge chasing. Eigenvalues are preserved exactly
/// up to the accumulated rotation roundoff reported in the certificate.
inline TridiagonalReduction reduce_band_to_tridiagonal(const BandMatrix& A) {
  if (A.bandwidth > 2) throw SpecError("reduce_band_to_tridiagonal: bandwidth > 2");
  const std::size_t n = A.n;
  TridiagonalReduction out;
  out.T.diag = A.diag;
  out.T.off = A.sub1;
  if (n > 0 && out.T.off.size() + 1 != n) out.T.off.assign(n - 1, 0.0);
  if (A.bandwidth < 2 || n < 3) return out;

  std::vector<double> d = A.diag, e = out.T.off, g = A.sub2;
  g.resize(n, 0.0);  // pad for index safety
  e.resize(n, 0.0);

  double c = 1.0, s = 0.0;
  auto make_rotation = [&](double& a, double& b) {
    const double r = std::hypot(a, b);
    if (r == 0.0) {
      c = 1.0;
      s = 0.0;
      return false;
    }
    c = a / r;
    s = b / r;
    a = r;
    b = 0.0;
    return true;
  };
  auto rotate_pair = [&](double& x, double& y) {
    const double nx = c * x + s * y, ny = -s * x + c * y;
    x = nx;
    y = ny;
  };
  // Similarity update of the 2x2 block at plane (q, q+1).
  auto rotate_block = [&](std::size_t q) {
    const double d1 = d[q], d2 = d[q + 1], off = e[q];
    d[q] = c * c * d1 + 2.0 * c * s * off + s * s * d2;
    d[q + 1] = s * s * d1 - 2.0 * c * s * off + c * c * d2;
    e[q] = c * s * (d2 - d1) + (c * c - s * s) * off;
  };
  auto record = [&](std::size_t plane) {
    out.rotations.push_back({plane, c, s});
    out.orthogonality_certificate =
        std::max(out.orthogonality_certificate, std::abs(c * c + s * s - 1.0));
  };

  for (std::size_t k = 0; k + 2 < n; ++k) {
    if (g[k] == 0.0) continue;
    // First rotation, plane (k+1, k+2): zero A[k+2, k] against A[k+1, k].
    if (!make_rotation(e[k], g[k])) continue;
    rotate_block(k + 1);
    if (k + 3 < n) rotate_pair(g[k + 1], e[k + 2]);
    record(k + 1);
    double bulge = 0.0;
    std::size_t C = k + 1;  // bulge column; bulge sits at (C+3, C)
    if (k + 4 < n) {
      bulge = s * g[k + 2];
      g[k + 2] = c * g[k + 2];
    }
    while (bulge != 0.0) {
      // Chase rotation, plane (C+2, C+3): zero A[C+3, C] against A[C+2, C].
      if (!make_rotation(g[C], bulge)) break;
      rotate_pair(e[C + 1], g[C + 1]);
      rotate_block(C + 2);
      if (C + 4 < n) rotate_pair(g[C + 2], e[C + 3]);
      record(C + 2);
      if (C + 5 < n) {
        bulge = s * g[C + 3];
        g[C + 3] = c * g[C + 3];
        C += 2;
      } else {
        bulge = 0.0;
      }
    }
  }

  out.T.diag.assign(d.begin(), d.begin() + n);
  out.T.off.assign(e.begin(), e.begin() + (n - 1));
  return out;
}

/// Number of eigenvalues of T strictly below sigma (Sturm sequence count).
inline std::size_t sturm_count_below(const Tridiagonal& T, double sigma) {
  const std::size_t n = T.size();
  std::size_t count = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min() * 4.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double off2 = i == 0 ? 0.0 : T.off[i - 1] * T.off[i - 1];
    q = (T.diag[i] - sigma) - (i == 0 ? 0.0 : off2 / q);
    if (std::abs(q) < tiny) q = q < 0.0 ? -tiny : tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

inline void gershgorin_bounds(const Tridiagonal& T, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  const std::size_t n = T.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(T.off[i - 1]);
    if (i + 1 < n) r += std::abs(T.off[i]);
    lo = std::min(lo, T.diag[i] - r);
    hi = std::max(hi, T.diag[i] + r);
  }
  if (!(lo <= hi)) { lo = 0.0; hi = 0.0; }
}

struct EigenResult {
  std::vector<double> values;     // sorted ascending
  std::vector<double> residuals;  // ||A v - lambda B v|| / ||v||, when computed
  long iterations = 0;
};

/// Eigenvalue selection: either a 0-based index range [index_lo, index_hi]
/// or a real interval [a, b].
struct EigenRange {
  bool by_index = true;
  std::size_t index_lo = 0, index_hi = 0;
  double a = 0.0, b = 0.0;
  static EigenRange indices(std::size_t lo, std::size_t hi) {
    EigenRange r;
    r.by_index = true;
    r.index_lo = lo;
    r.index_hi = hi;
    return r;
  }
  static EigenRange interval(double a, double b) {
    EigenRange r;
    r.by_index = false;
    r.a = a;
    r.b = b;
    return r;
  }
};

namespace detail {

/// k-th (0-based) eigenvalue of T by bisection to absolute tolerance.
inline double bisect_index(const Tridiagonal& T, std::size_t k, double lo,
                           double hi, double tol, long& iterations) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at rounding floor
    ++iterations;
    if (sturm_count_below(T, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline double default_tolerance(const Tridiagonal& T, double tol) {
  if (tol > 0.0) return tol;
  double scale = 0.0;
  const std::size_t n = T.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::abs(T.diag[i]);
    if (i > 0) r += std::abs(T.off[i - 1]);
    if (i + 1 < n) r += std::abs(T.off[i]);
    scale = std::max(scale, r);
  }
  return 1e-10 * std::max(scale, 1.0);
}

}  // namespace detail

/// Requested eigenvalues of a symmetric tridiagonal matrix via Sturm
/// bisection. Counts are monotone in the shift; this is asserted on the
/// bracketing endpoints of every extracted eigenvalue.
inline EigenResult tridiag_eigen_bisection(const Tridiagonal& T,
                                           const EigenRange& which,
                                           double tol = 0.0) {
  EigenResult res;
  const std::size_t n = T.size();
  if (n == 0) return res;
  double lo, hi;
  gershgorin_bounds(T, lo, hi);
  const double pad = 1e-8 * (std::abs(lo) + std::abs(hi) + 1.0);
  lo -= pad;
  hi += pad;
  const double tol_abs = detail::default_tolerance(T, tol);

  std::size_t k_lo, k_hi;
  if (which.by_index) {
    k_lo = which.index_lo;
    k_hi = std::min(which.index_hi, n == 0 ? 0 : n - 1);
    if (k_lo > k_hi || k_lo >= n) return res;
  } else {
    if (which.a > which.b) return res;
    const std::size_t below_a = sturm_count_below(T, which.a);
    const std::size_t below_b = sturm_count_below(T, which.b);
    if (below_b <= below_a) return res;  // empty: not an error
    k_lo = below_a;
    k_hi = below_b - 1;
    lo = std::max(lo, which.a);
    hi = std::min(hi, which.b);
  }
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double v = detail::bisect_index(T, k, lo, hi, tol_abs, res.iterations);
    if (!res.values.empty() && v < res.values.back())
      throw std::logic_error("sturm bisection produced non-monotone values");
    res.values.push_back(v);
  }
  return res;
}

namespace detail {

/// One inverse-iteration pass: solve (T - sigma I) x = b by LU with partial
/// pivoting on the tridiagonal (one fill diagonal appears).
inline void shifted_tridiag_solve(const Tridiagonal& T, double sigma,
                                  std::vector<double>& x) {
  const std::size_t n = T.size();
  std::vector<double> a(n), b(n, 0.0), f(n, 0.0);
  // a: diagonal, b: first superdiagonal, f: fill superdiagonal of U.
  for (std::size_t i = 0; i < n; ++i) a[i] = T.diag[i] - sigma;
  for (std::size_t i = 0; i + 1 < n; ++i) b[i] = T.off[i];
  std::vector<double> low(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) low[i] = T.off[i];

  const double tiny = 1e-300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double piv = a[i], other = low[i];
    if (std::abs(other) > std::abs(piv)) {
      // swap rows i and i+1
      std::swap(a[i], low[i]);
      double bi = b[i];
      b[i] = a[i + 1];
      a[i + 1] = bi;
      double fi = f[i];
      f[i] = (i + 2 < n) ? b[i + 1] : 0.0;
      if (i + 2 < n) b[i + 1] = fi;
      std::swap(x[i], x[i + 1]);
      piv = a[i];
    }
    if (std::abs(piv) < tiny) piv = piv < 0 ? -tiny : tiny, a[i] = piv;
    const double m = low[i] / piv;
    a[i + 1] -= m * b[i];
    if (i + 2 < n) b[i + 1] -= m * f[i];
    x[i + 1] -= m * x[i];
    low[i] = 0.0;
  }
  if (std::abs(a[n - 1]) < tiny) a[n - 1] = a[n - 1] < 0 ? -tiny : tiny;
  // back substitution
  for (std::size_t ii = n; ii-- > 0;) {
    double v = x[ii];
    if (ii + 1 < n) v -= b[ii] * x[ii + 1];
    if (ii + 2 < n) v -= f[ii] * x[ii + 2];
    x[ii] = v / a[ii];
  }
}

inline void normalize(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  s = std::sqrt(s);
  if (s == 0.0) return;
  for (double& v : x) v /= s;
}

/// Eigenvector of T for an eigenvalue estimate, by inverse iteration.
inline std::vector<double> tridiag_eigenvector(const Tridiagonal& T,
                                               double lambda, int iters = 3) {
  const std::size_t n = T.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * ((i * 2654435761u) % 97) / 97.0;
  normalize(x);
  for (int it = 0; it < iters; ++it) {
    shifted_tridiag_solve(T, lambda, x);
    normalize(x);
  }
  return x;
}

}  // namespace detail

/// Map a tridiagonal eigenvector back through the stored reduction rotations
/// to an eigenvector of the original band matrix.
inline std::vector<double> apply_reduction_inverse(
    const TridiagonalReduction& red, std::vector<double> w) {
  for (auto it = red.rotations.rbegin(); it != red.rotations.rend(); ++it) {
    const double wp = w[it->plane], wq = w[it->plane + 1];
    w[it->plane] = it->c * wp - it->s * wq;
    w[it->plane + 1] = it->s * wp + it->c * wq;
  }
  return w;
}

namespace detail {

struct ScaledProblem {
  BandMatrix Ahat;
  std::vector<double> dscale;  // D = diag(1/sqrt(B))
};

inline ScaledProblem scale_pencil(const BandMatrix& A,
                                  const std::vector<double>& B) {
  if (B.size() != A.n) throw SpecError("pencil: weight size mismatch");
  ScaledProblem sp;
  sp.dscale.resize(A.n);
  for (std::size_t i = 0; i < A.n; ++i) {
    if (!(B[i] > 0.0)) throw WeightError("non-positive weight entry");
    sp.dscale[i] = 1.0 / std::sqrt(B[i]);
  }
  sp.Ahat = A;
  for (std::size_t i = 0; i < A.n; ++i)
    sp.Ahat.diag[i] *= sp.dscale[i] * sp.dscale[i];
  if (A.bandwidth >= 1)
    for (std::size_t i = 0; i + 1 < A.n; ++i)
      sp.Ahat.sub1[i] *= sp.dscale[i] * sp.dscale[i + 1];
  if (A.bandwidth >= 2)
    for (std::size_t i = 0; i + 2 < A.n; ++i)
      sp.Ahat.sub2[i] *= sp.dscale[i] * sp.dscale[i + 2];
  return sp;
}

}  // namespace detail

/// Eigenvalues [index_lo, index_hi] (0-based, ascending) of the generalized
/// problem A x = lambda B x with positive diagonal B, with residuals checked
/// against the original pencil via inverse-iteration eigenvectors.
inline EigenResult generalized_eigen_by_index(const BandMatrix& A,
                                              const std::vector<double>& B,
                                              std::size_t index_lo,
                                              std::size_t index_hi,
                                              double tol = 0.0) {
  auto sp = detail::scale_pencil(A, B);
  auto red = reduce_band_to_tridiagonal(sp.Ahat);
  EigenResult res =
      tridiag_eigen_bisection(red.T, EigenRange::indices(index_lo, index_hi), tol);
  res.residuals.resize(res.values.size(), 0.0);
  for (std::size_t j = 0; j < res.values.size(); ++j) {
    auto w = detail::tridiag_eigenvector(red.T, res.values[j]);
    auto xhat = apply_reduction_inverse(red, std::move(w));
    // v = D * xhat solves the original pencil
    std::vector<double> v(A.n);
    for (std::size_t i = 0; i < A.n; ++i) v[i] = sp.dscale[i] * xhat[i];
    std::vector<double> Av;
    A.matvec(v, Av);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < A.n; ++i) {
      const double r = Av[i] - res.values[j] * B[i] * v[i];
      num += r * r;
      den += v[i] * v[i];
    }
    res.residuals[j] = std::sqrt(num) / std::sqrt(den);
  }
  return res;
}

/// k smallest generalized eigenvalues of (A, B); B positive diagonal.
inline EigenResult lowest_k_generalized(const BandMatrix& A,
                                        const std::vector<double>& B,
                                        std::size_t k, double tol = 0.0) {
  if (k == 0) return {};
  if (k > A.n) throw SpecError("lowest_k_generalized: k exceeds dimension");
  return generalized_eigen_by_index(A, B, 0, k - 1, tol);
}

/// Eigenvector for a computed generalized eigenvalue (inverse iteration on
/// the scaled problem, mapped back). Deterministic up to sign; the sign is
/// fixed so that the first nonzero component is positive.
inline std::vector<double> generalized_eigenvector(const BandMatrix& A,
                                                   const std::vector<double>& B,
                                                   double lambda) {
  auto sp = detail::scale_pencil(A, B);
  auto red = reduce_band_to_tridiagonal(sp.Ahat);
  auto w = detail::tridiag_eigenvector(red.T, lambda, 4);
  auto xhat = apply_reduction_inverse(red, std::move(w));
  std::vector<double> v(A.n);
  for (std::size_t i = 0; i < A.n; ++i) v[i] = sp.dscale[i] * xhat[i];
  for (double c : v) {
    if (std::abs(c) > 1e-14) {
      if (c < 0.0)
        for (double& y : v) y = -y;
      break;
    }
  }
  return v;
}

inline void BandMatrix::write_coo(std::ostream& os) const {
  char buf[48];
  auto emit = [&](std::size_t i, std::size_t j, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << i << ' ' << j << ' ' << buf << '\n';
  };
  for (std::size_t i = 0; i < n; ++i) {
    emit(i, i, diag[i]);
    if (bandwidth >= 1 && i + 1 < n) emit(i + 1, i, sub1[i]);
    if (bandwidth >= 2 && i + 2 < n) emit(i + 2, i, sub2[i]);
  }
}

}  // namespace spingeo
