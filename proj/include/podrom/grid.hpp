#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "podrom/errors.hpp"

namespace podrom {

/// Samples of a scalar field at the grid points.
using Field = std::vector<double>;

/// Discretization of the convection term. None disables it entirely
/// (heat-equation mode).
enum class ConvectionScheme { Upwind2, Upwind1, None };

inline const char* to_string(ConvectionScheme s) {
  switch (s) {
    case ConvectionScheme::Upwind2: return "upwind2";
    case ConvectionScheme::Upwind1: return "upwind1";
    case ConvectionScheme::None: return "none";
  }
  return "?";
}

/// Uniform periodic mesh on [0, 2*pi): x_j = j*dx, j = 0..m-1.
struct Grid {
  std::size_t m = 0;
  double length = 0.0;
  double dx = 0.0;
  std::vector<double> x;
};

/// Builds the periodic grid. The second-order upwind stencil reaches two
/// points back, so fewer than 4 points would alias its footprint.
inline Grid make_grid(std::size_t m) {
  if (m < 4) {
    throw GridError("grid needs at least 4 points, got " + std::to_string(m));
  }
  Grid g;
  g.m = m;
  g.length = 2.0 * std::numbers::pi;
  g.dx = g.length / static_cast<double>(m);
  g.x.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    g.x[j] = static_cast<double>(j) * g.dx;
  }
  return g;
}

/// dt = cfl * min(dx/u_ref, dx^2/(2*nu)). A bound whose denominator is zero
/// is skipped; if both are skipped there is no admissible step.
inline double cfl_timestep(const Grid& grid, double u_ref, double nu,
                           double cfl) {
  if (cfl <= 0.0) throw TimestepError("cfl must be positive");
  if (u_ref < 0.0) throw TimestepError("u_ref must be non-negative");
  if (nu < 0.0) throw TimestepError("nu must be non-negative");
  double bound = std::numeric_limits<double>::infinity();
  if (u_ref > 0.0) bound = std::min(bound, grid.dx / u_ref);
  if (nu > 0.0) bound = std::min(bound, grid.dx * grid.dx / (2.0 * nu));
  if (!std::isfinite(bound)) {
    throw TimestepError("no CFL bound available: u_ref and nu are both zero");
  }
  return cfl * bound;
}

inline void check_field(const Field& f, const Grid& grid,
                        const char* what = "field") {
  if (f.size() != grid.m) {
    throw ShapeError(std::string(what) + " has " + std::to_string(f.size()) +
                     " entries, grid has " + std::to_string(grid.m));
  }
}

// ---------------------------------------------------------------------------
// Periodic finite-difference stencils. The _into variants write into a
// preallocated output (must not alias the input); the value-returning
// wrappers allocate. All wrap indices periodically, including the two-point
// upwind history.
// ---------------------------------------------------------------------------

/// d/dx, second-order upwind: (3 f_j - 4 f_{j-1} + f_{j-2}) / (2 dx).
inline void upwind2_into(const Field& f, const Grid& grid, Field& out) {
  const std::size_t m = grid.m;
  const double s = 1.0 / (2.0 * grid.dx);
  out[0] = (3.0 * f[0] - 4.0 * f[m - 1] + f[m - 2]) * s;
  out[1] = (3.0 * f[1] - 4.0 * f[0] + f[m - 1]) * s;
  for (std::size_t j = 2; j < m; ++j) {
    out[j] = (3.0 * f[j] - 4.0 * f[j - 1] + f[j - 2]) * s;
  }
}

/// d/dx, second-order one-sided forward: (-3 f_j + 4 f_{j+1} - f_{j+2}) / (2 dx).
/// Mirror of upwind2, used where the local flow runs leftward.
inline void forward2_into(const Field& f, const Grid& grid, Field& out) {
  const std::size_t m = grid.m;
  const double s = 1.0 / (2.0 * grid.dx);
  for (std::size_t j = 0; j + 2 < m; ++j) {
    out[j] = (-3.0 * f[j] + 4.0 * f[j + 1] - f[j + 2]) * s;
  }
  out[m - 2] = (-3.0 * f[m - 2] + 4.0 * f[m - 1] - f[0]) * s;
  out[m - 1] = (-3.0 * f[m - 1] + 4.0 * f[0] - f[1]) * s;
}

/// d/dx, first-order upwind: (f_j - f_{j-1}) / dx.
inline void upwind1_into(const Field& f, const Grid& grid, Field& out) {
  const std::size_t m = grid.m;
  const double s = 1.0 / grid.dx;
  out[0] = (f[0] - f[m - 1]) * s;
  for (std::size_t j = 1; j < m; ++j) {
    out[j] = (f[j] - f[j - 1]) * s;
  }
}

/// d/dx, first-order forward: (f_{j+1} - f_j) / dx.
inline void forward1_into(const Field& f, const Grid& grid, Field& out) {
  const std::size_t m = grid.m;
  const double s = 1.0 / grid.dx;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    out[j] = (f[j + 1] - f[j]) * s;
  }
  out[m - 1] = (f[0] - f[m - 1]) * s;
}

/// d2/dx2, second-order central: (f_{j+1} - 2 f_j + f_{j-1}) / dx^2.
inline void central2_into(const Field& f, const Grid& grid, Field& out) {
  const std::size_t m = grid.m;
  const double s = 1.0 / (grid.dx * grid.dx);
  out[0] = (f[1] - 2.0 * f[0] + f[m - 1]) * s;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) * s;
  }
  out[m - 1] = (f[0] - 2.0 * f[m - 1] + f[m - 2]) * s;
}

inline Field upwind2(const Field& f, const Grid& grid) {
  check_field(f, grid);
  Field out(grid.m);
  upwind2_into(f, grid, out);
  return out;
}

inline Field forward2(const Field& f, const Grid& grid) {
  check_field(f, grid);
  Field out(grid.m);
  forward2_into(f, grid, out);
  return out;
}

inline Field upwind1(const Field& f, const Grid& grid) {
  check_field(f, grid);
  Field out(grid.m);
  upwind1_into(f, grid, out);
  return out;
}

inline Field forward1(const Field& f, const Grid& grid) {
  check_field(f, grid);
  Field out(grid.m);
  forward1_into(f, grid, out);
  return out;
}

inline Field central2(const Field& f, const Grid& grid) {
  check_field(f, grid);
  Field out(grid.m);
  central2_into(f, grid, out);
  return out;
}

/// Upwind-side (backward) convection derivative for the scheme, valid where
/// the flow is non-negative. None yields zeros.
inline Field convection_derivative(const Field& f, const Grid& grid,
                                   ConvectionScheme scheme) {
  switch (scheme) {
    case ConvectionScheme::Upwind2: return upwind2(f, grid);
    case ConvectionScheme::Upwind1: return upwind1(f, grid);
    case ConvectionScheme::None: break;
  }
  check_field(f, grid);
  return Field(grid.m, 0.0);
}

/// Downwind-mirror derivative, valid where the flow is negative.
inline Field convection_derivative_forward(const Field& f, const Grid& grid,
                                           ConvectionScheme scheme) {
  switch (scheme) {
    case ConvectionScheme::Upwind2: return forward2(f, grid);
    case ConvectionScheme::Upwind1: return forward1(f, grid);
    case ConvectionScheme::None: break;
  }
  check_field(f, grid);
  return Field(grid.m, 0.0);
}

}  // namespace podrom
