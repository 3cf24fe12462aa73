// Shared error types and small numeric helpers.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spingeo {

/// Invalid construction parameters (rejected specs, bad modes).
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested output exceeds what the grid resolution can certify.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A proven inequality failed beyond tolerance: solver bug, hard stop.
struct TheoremViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-positive weight entry in a generalized eigenproblem.
struct WeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Quadratic extrapolation of (x1,y1),(x2,y2),(x3,y3) to x.
inline double quadratic_extrapolate(double x, double x1, double y1, double x2,
                                    double y2, double x3, double y3) {
  const double l1 = (x - x2) * (x - x3) / ((x1 - x2) * (x1 - x3));
  const double l2 = (x - x1) * (x - x3) / ((x2 - x1) * (x2 - x3));
  const double l3 = (x - x1) * (x - x2) / ((x3 - x1) * (x3 - x2));
  return l1 * y1 + l2 * y2 + l3 * y3;
}

/// First derivative at x2 from three points (non-uniform 3-point stencil).
inline double fd_first(double x1, double y1, double x2, double y2, double x3,
                       double y3) {
  const double hl = x2 - x1, hr = x3 - x2;
  return (-hr / (hl * (hl + hr))) * y1 + ((hr - hl) / (hl * hr)) * y2 +
         (hl / (hr * (hl + hr))) * y3;
}

/// Second derivative at x2 from three points (non-uniform 3-point stencil).
inline double fd_second(double x1, double y1, double x2, double y2, double x3,
                        double y3) {
  const double hl = x2 - x1, hr = x3 - x2;
  return 2.0 * (hr * y1 - (hl + hr) * y2 + hl * y3) / (hl * hr * (hl + hr));
}

/// Composite Simpson over one uniformly spaced block with an even cell count.
inline double simpson_uniform(const std::vector<double>& y, std::size_t first,
                              std::size_t last, double h) {
  if (last <= first) return 0.0;
  const std::size_t cells = last - first;
  if (cells % 2 != 0) throw std::logic_error("simpson_uniform: odd cell count");
  double acc = 0.0;
  for (std::size_t i = first; i + 2 <= last; i += 2)
    acc += y[i] + 4.0 * y[i + 1] + y[i + 2];
  return acc * h / 3.0;
}

}  // namespace spingeo
