// Discrete self-adjoint radial operators for each angular mode: Laplace,
// Yamabe, Dirac, and their Dirichlet-cap restrictions. All assemblies are
// generalized symmetric pencils (A, B) with banded A and positive diagonal B.
//
// Dirac reduction: per fiber eigenvalue mu the operator acts on 2-component
// densities phi = f^{(n-1)/2} (a, b) over plain dt measure. In the rotated
// components u = (phi_1 + phi_2)/sqrt(2), v = (phi_1 - phi_2)/sqrt(2) it takes
// the off-diagonal form [[0, A*], [A, 0]] with A = mu/f - d/dt. We discretize
// A on a staggered grid (u at nodes, v at cell midpoints), which yields an
// exactly symmetric tridiagonal matrix with zero diagonal: the spectrum is
// symmetric about 0 exactly, there are no spurious branches, and the square
// splits into the two tridiagonal partner blocks A*A and AA*.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spingeo/common.hpp"
#include "spingeo/eigensolve.hpp"
#include "spingeo/geometry.hpp"
#include "spingeo/modes.hpp"
#include "spingeo/profile.hpp"

namespace spingeo {

enum class RadialKind {
  Laplace,
  Yamabe,
  Dirac,          // first-order pencil, spectrum symmetric about 0
  DiracSquaredU,  // A*A block
  DiracSquaredV,  // AA* block
};

struct RadialOperator {
  RadialKind kind;
  bool cap = false;          // Dirichlet restriction to the body region
  int n = 0;                 // sphere dimension
  int mode_index = 0;        // ell or k
  double mode_value = 0.0;   // ell(ell+n-2) or mu
  std::string convention;    // sign/reduction tag for the Dirac family
  BandMatrix A;
  std::vector<double> B;
  double h_min = 0.0;

  std::size_t dim() const { return A.n; }
};

namespace detail {

inline double min_cell_width(const ProfileGrid& p) {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& reg : p.regions) h = std::min(h, reg.h);
  return h;
}

/// Stiffness + lumped mass of the weighted form
///   q(u) = int (u'^2 + V u^2) w dt,  <u,u> = int u^2 w dt,  w = f^{n-1},
/// with w at cell midpoints, restricted to nodes [first, last] of the grid
/// (Dirichlet beyond). V is a nodal potential, may be null.
inline void assemble_sturm_liouville(const ProfileGrid& p, std::size_t first,
                                     std::size_t last,
                                     const std::vector<double>* V,
                                     double stiffness_factor, BandMatrix& A,
                                     std::vector<double>& B) {
  const int n = p.dim;
  const std::size_t dim = last - first + 1;
  A = BandMatrix::zeros(dim, 1);
  B.assign(dim, 0.0);
  const std::size_t cell_lo = first == 0 ? 0 : first - 1;
  const std::size_t cell_hi = std::min(p.h_cell.size() - 1, last);
  for (std::size_t c = cell_lo; c <= cell_hi; ++c) {
    const double h = p.h_cell[c];
    const double w = std::pow(p.f_mid[c], n - 1);
    const double k = stiffness_factor * w / h;
    const double mhalf = 0.5 * h * w;
    // nodes c and c+1, mapped into the restricted index space when kept
    const bool keep_lo = c >= first && c <= last;
    const bool keep_hi = c + 1 >= first && c + 1 <= last;
    const std::size_t ilo = c - first, ihi = c + 1 - first;
    if (keep_lo) {
      A.diag[ilo] += k;
      B[ilo] += mhalf;
    }
    if (keep_hi) {
      A.diag[ihi] += k;
      B[ihi] += mhalf;
    }
    if (keep_lo && keep_hi) A.sub1[ilo] -= k;
  }
  if (V != nullptr)
    for (std::size_t i = 0; i < dim; ++i) A.diag[i] += (*V)[first + i] * B[i];
}

}  // namespace detail

/// Laplace radial operator for one spherical-harmonic mode. Natural (free)
/// boundary at the poles for ell = 0; Dirichlet at the pole nodes otherwise.
/// When cap_last is set, the domain is restricted to [0, t(cap_last)] with a
/// Dirichlet condition at that node (trial functions vanishing beyond).
inline RadialOperator assemble_laplace_radial(const ProfileGrid& p,
                                              const LaplaceMode& mode,
                                              std::size_t cap_last = 0) {
  const int n = p.dim;
  if (mode.value != double(mode.ell) * (mode.ell + n - 2))
    throw SpecError("laplace radial: mode does not match profile dimension");
  const bool cap = cap_last != 0;
  const std::size_t end = cap ? cap_last - 1 : p.last_node() - (mode.ell >= 1 ? 1 : 0);
  const std::size_t first = mode.ell >= 1 ? 1 : 0;
  RadialOperator op;
  op.kind = RadialKind::Laplace;
  op.cap = cap;
  op.n = n;
  op.mode_index = mode.ell;
  op.mode_value = mode.value;
  op.h_min = detail::min_cell_width(p);
  if (mode.ell >= 1) {
    std::vector<double> V(p.node_count(), 0.0);
    for (std::size_t i = first; i <= end; ++i) V[i] = mode.value / (p.f[i] * p.f[i]);
    detail::assemble_sturm_liouville(p, first, end, &V, 1.0, op.A, op.B);
  } else {
    detail::assemble_sturm_liouville(p, first, end, nullptr, 1.0, op.A, op.B);
  }
  return op;
}

/// Yamabe radial operator Y = 4 (n-1)/(n-2) Delta + S for one mode, n >= 3.
inline RadialOperator assemble_yamabe_radial(const ProfileGrid& p,
                                             const CurvatureField& c,
                                             const LaplaceMode& mode,
                                             std::size_t cap_last = 0) {
  const int n = p.dim;
  if (n < 3) throw SpecError("yamabe radial: undefined for n = 2");
  RadialOperator op = assemble_laplace_radial(p, mode, cap_last);
  const double coef = 4.0 * (n - 1) / double(n - 2);
  const std::size_t first = mode.ell >= 1 ? 1 : 0;
  for (std::size_t i = 0; i < op.dim(); ++i) {
    op.A.diag[i] *= coef;
    op.A.diag[i] += c.S[first + i] * op.B[i];
  }
  for (auto& e : op.A.sub1) e *= coef;
  op.kind = RadialKind::Yamabe;
  return op;
}

namespace detail {

/// Coefficients of the staggered first-order operator A = mu/f - d/dt from
/// u-nodes to cell midpoints: row j couples u_j with c_minus and u_{j+1}
/// with c_plus.
struct DiracCoeffs {
  std::vector<double> c_minus, c_plus;  // per cell j = 0..K-1
  std::vector<double> wu;               // node weights (h_{i-1}+h_i)/2
  std::vector<double> wv;               // cell weights h_j
};

inline DiracCoeffs dirac_coefficients(const ProfileGrid& p, double mu) {
  const std::size_t K = p.h_cell.size();
  DiracCoeffs dc;
  dc.c_minus.resize(K);
  dc.c_plus.resize(K);
  dc.wv = p.h_cell;
  dc.wu.assign(K + 1, 0.0);
  for (std::size_t j = 0; j < K; ++j) {
    const double h = p.h_cell[j];
    const double pot = mu / (2.0 * p.f_mid[j]);
    dc.c_minus[j] = pot + 1.0 / h;
    dc.c_plus[j] = pot - 1.0 / h;
    dc.wu[j] += 0.5 * h;
    dc.wu[j + 1] += 0.5 * h;
  }
  return dc;
}

}  // namespace detail

/// Reduced first-order Dirac pencil for one fiber mode: tridiagonal with an
/// exactly zero diagonal in the interleaved order (u_1, v_{3/2}, u_2, ...),
/// so the discrete spectrum is symmetric about 0 exactly. Pole treatment:
/// one cell is truncated at each end; the remaining boundary data (v at the
/// first half-node, u at the far pole) is set to zero, which suppresses the
/// two singular indicial branches.
inline RadialOperator assemble_dirac_radial(const ProfileGrid& p,
                                            const DiracMode& mode) {
  const int n = p.dim;
  if (mode.mu != 0.5 * (n - 1) + mode.k)
    throw SpecError("dirac radial: mode does not match profile dimension");
  const std::size_t K = p.h_cell.size();
  if (K < 3) throw ResolutionError("dirac radial: grid too small");
  auto dc = detail::dirac_coefficients(p, mode.mu);
  const std::size_t m = K - 1;  // u DOFs u_1..u_{K-1}; v DOFs at cells 1..K-1
  RadialOperator op;
  op.kind = RadialKind::Dirac;
  op.n = n;
  op.mode_index = mode.k;
  op.mode_value = mode.mu;
  op.convention = "A = mu/f - d/dt on u = (phi1+phi2)/sqrt2";
  op.h_min = detail::min_cell_width(p);
  op.A = BandMatrix::zeros(2 * m, 1);
  op.B.assign(2 * m, 0.0);
  for (std::size_t i = 1; i <= m; ++i) {
    op.B[2 * (i - 1)] = dc.wu[i];          // u_i
    op.B[2 * (i - 1) + 1] = dc.wv[i];      // v at cell i
  }
  // entry(u_i, v_i) = h_i c_minus(i); entry(v_i, u_{i+1}) = h_i c_plus(i)
  for (std::size_t i = 1; i <= m; ++i) {
    op.A.sub1[2 * (i - 1)] = dc.wv[i] * dc.c_minus[i];
    if (i < m) op.A.sub1[2 * (i - 1) + 1] = dc.wv[i] * dc.c_plus[i];
  }
  return op;
}

/// SUSY partner blocks of the squared Dirac operator: (A*A, B_u) over the
/// u-nodes and (AA*, B_v) over the cell midpoints. Their nonzero spectra
/// coincide exactly for the full problem; under a cap restriction they
/// split into the two Dirichlet sequences of the squared operator.
/// cap_last = 0 means the full profile.
inline std::pair<RadialOperator, RadialOperator> dirac_squared_blocks(
    const ProfileGrid& p, const DiracMode& mode, std::size_t cap_last = 0) {
  const int n = p.dim;
  if (mode.mu != 0.5 * (n - 1) + mode.k)
    throw SpecError("dirac radial: mode does not match profile dimension");
  const std::size_t K = p.h_cell.size();
  auto dc = detail::dirac_coefficients(p, mode.mu);
  const std::size_t m_full = K - 1;
  const std::size_t m = cap_last != 0 ? cap_last - 1 : m_full;
  if (m < 2 || m > m_full) throw ResolutionError("dirac blocks: bad domain");

  RadialOperator U, V;
  U.kind = RadialKind::DiracSquaredU;
  V.kind = RadialKind::DiracSquaredV;
  U.cap = V.cap = cap_last != 0;
  U.n = V.n = n;
  U.mode_index = V.mode_index = mode.k;
  U.mode_value = V.mode_value = mode.mu;
  U.h_min = V.h_min = detail::min_cell_width(p);

  // u-block over u_1..u_m: G[i,i] = sum_{j in {i-1, i}, j >= 1} h_j C[j,i]^2
  U.A = BandMatrix::zeros(m, 1);
  U.B.assign(m, 0.0);
  for (std::size_t i = 1; i <= m; ++i) {
    double d = 0.0;
    // cell i-1 couples through c_plus; its midpoint is a DOF only for i >= 2
    if (i >= 2) d += dc.wv[i - 1] * dc.c_plus[i - 1] * dc.c_plus[i - 1];
    // cell i couples through c_minus; i <= m <= K-1 is always a DOF
    d += dc.wv[i] * dc.c_minus[i] * dc.c_minus[i];
    U.A.diag[i - 1] = d;
    U.B[i - 1] = dc.wu[i];
    if (i < m) U.A.sub1[i - 1] = dc.wv[i] * dc.c_minus[i] * dc.c_plus[i];
  }

  // v-block over cells 1..m: G[j,j] = sum_{i in {j, j+1} kept in the FULL
  // problem} (h_j C[j,i])^2 / wu_i; the principal-submatrix restriction
  // keeps the full diagonal, which is what makes cap eigenvalues dominate.
  V.A = BandMatrix::zeros(m, 1);
  V.B.assign(m, 0.0);
  for (std::size_t j = 1; j <= m; ++j) {
    double d = 0.0;
    const double cj_minus = dc.wv[j] * dc.c_minus[j];
    const double cj_plus = dc.wv[j] * dc.c_plus[j];
    d += cj_minus * cj_minus / dc.wu[j];
    if (j + 1 <= m_full)  // u_{j+1} is a DOF of the full problem
      d += cj_plus * cj_plus / dc.wu[j + 1];
    V.A.diag[j - 1] = d;
    V.B[j - 1] = dc.wv[j];
    if (j < m)
      V.A.sub1[j - 1] =
          cj_plus * dc.wv[j + 1] * dc.c_minus[j + 1] / dc.wu[j + 1];
  }
  return {std::move(U), std::move(V)};
}

/// Dirichlet-cap restriction: same assembly confined to the body region
/// [0, t_body] with a Dirichlet condition at the t_body node. Because body
/// data is identical across (r, L), the matrices are bit-for-bit identical
/// for all neck parameters.
inline RadialOperator assemble_cap_laplace(const ProfileGrid& p,
                                           const LaplaceMode& mode) {
  const Region* body = p.find_region(RegionKind::Body);
  if (body == nullptr || body->cells == 0)
    throw SpecError("cap restriction: profile has no body region");
  return assemble_laplace_radial(p, mode, body->last_node);
}

inline RadialOperator assemble_cap_yamabe(const ProfileGrid& p,
                                          const CurvatureField& c,
                                          const LaplaceMode& mode) {
  const Region* body = p.find_region(RegionKind::Body);
  if (body == nullptr) throw SpecError("cap restriction: profile has no body region");
  return assemble_yamabe_radial(p, c, mode, body->last_node);
}

/// Cap restriction of the squared Dirac operator: both SUSY blocks as
/// principal submatrices of the full squared pencil, concatenated into one
/// block-diagonal tridiagonal operator.
inline RadialOperator assemble_cap_dirac_squared(const ProfileGrid& p,
                                                 const DiracMode& mode) {
  const Region* body = p.find_region(RegionKind::Body);
  if (body == nullptr) throw SpecError("cap restriction: profile has no body region");
  auto [U, V] = dirac_squared_blocks(p, mode, body->last_node);
  RadialOperator op;
  op.kind = RadialKind::DiracSquaredU;
  op.cap = true;
  op.n = p.dim;
  op.mode_index = mode.k;
  op.mode_value = mode.mu;
  op.convention = "cap D^2 = (A*A)_Dir (+) (AA*)_Dir";
  op.h_min = U.h_min;
  const std::size_t m = U.dim();
  op.A = BandMatrix::zeros(2 * m, 1);
  op.B.assign(2 * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    op.A.diag[i] = U.A.diag[i];
    op.B[i] = U.B[i];
    if (i + 1 < m) op.A.sub1[i] = U.A.sub1[i];
    op.A.diag[m + i] = V.A.diag[i];
    op.B[m + i] = V.B[i];
    if (i + 1 < m) op.A.sub1[m + i] = V.A.sub1[i];
  }
  if (m >= 1) op.A.sub1[m - 1] = 0.0;  // block seam
  return op;
}

}  // namespace spingeo
