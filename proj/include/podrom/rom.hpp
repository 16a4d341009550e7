#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "podrom/errors.hpp"
#include "podrom/fdsolver.hpp"
#include "podrom/grid.hpp"
#include "podrom/linalg.hpp"
#include "podrom/pod.hpp"

namespace podrom {

/// Precomputed Galerkin operators plus the integration configuration.
///
/// dt is the full-order step the reduced ODE is advanced with. substep >= 2
/// coarsens the integrator step to substep*dt; sample times that fall inside
/// a coarse step are filled by cubic Hermite dense output. dt = 0 means
/// "derive from the first sample interval".
struct RomOperators {
  DenseMatrix phi;        // m x i, spatial modes
  DenseMatrix phi_t;      // i x m
  DenseMatrix phi_x;      // m x i, upwind-side mode derivative per column
  DenseMatrix phi_x_fwd;  // m x i, downwind-mirror derivative per column
  DenseMatrix phi_xx;     // m x i, central second derivative per column
  DenseMatrix diff_op;    // i x i, phi_t * phi_xx (scaled by nu in the rhs)
  std::vector<double> q_proj;  // i, phi_t * Q
  // Transposed copies of the derivative operators; the rhs hot loop
  // accumulates along their contiguous rows.
  DenseMatrix phi_x_t;      // i x m
  DenseMatrix phi_x_fwd_t;  // i x m
  double nu = 0.0;
  ConvectionScheme scheme = ConvectionScheme::Upwind2;
  double dt = 0.0;
  std::size_t substep = 1;

  std::size_t modes() const noexcept { return phi.cols(); }
  std::size_t grid_points() const noexcept { return phi.rows(); }
};

/// Reduced temporal coefficients A(t) sampled at the full-order snapshot
/// times: column k of `a` is a(times[k]).
struct RomTrajectory {
  DenseMatrix a;  // i x n
  std::vector<double> times;
};

struct IntegrateResult {
  RomTrajectory trajectory;
  double wall_time = 0.0;  // seconds, integration loop only
};

/// Projects the governing operators onto the basis. The mode derivatives use
/// the same convection scheme as the generating simulation; scheme = None
/// leaves phi_x zero and drops the convection path from the rhs.
inline RomOperators assemble(const PodBasis& basis, const Grid& grid,
                             double nu, const Field& q,
                             ConvectionScheme scheme) {
  if (basis.phi.rows() != grid.m) {
    throw ShapeError("assemble: basis has " + std::to_string(basis.phi.rows()) +
                     " rows, grid has " + std::to_string(grid.m) + " points");
  }
  check_field(q, grid, "source");

  RomOperators ops;
  ops.phi = basis.phi;
  ops.phi_t = transpose(basis.phi);
  ops.nu = nu;
  ops.scheme = scheme;

  const std::size_t i = basis.mode_count;
  ops.phi_x = DenseMatrix(grid.m, i);
  ops.phi_x_fwd = DenseMatrix(grid.m, i);
  ops.phi_xx = DenseMatrix(grid.m, i);
  for (std::size_t k = 0; k < i; ++k) {
    const Field col = basis.phi.column(k);
    ops.phi_x.set_column(k, convection_derivative(col, grid, scheme));
    ops.phi_x_fwd.set_column(k, convection_derivative_forward(col, grid, scheme));
    ops.phi_xx.set_column(k, central2(col, grid));
  }
  ops.diff_op = matmul(ops.phi_t, ops.phi_xx);
  ops.q_proj = matvec(ops.phi_t, q);
  ops.phi_x_t = transpose(ops.phi_x);
  ops.phi_x_fwd_t = transpose(ops.phi_x_fwd);
  return ops;
}

/// a0 = phi^T * U(x, 0).
inline std::vector<double> project_initial(const PodBasis& basis,
                                           const Field& u0) {
  if (u0.size() != basis.phi.rows()) {
    throw ShapeError("project_initial: field has " + std::to_string(u0.size()) +
                     " entries, basis has " + std::to_string(basis.phi.rows()));
  }
  std::vector<double> a0(basis.mode_count, 0.0);
  for (std::size_t k = 0; k < basis.mode_count; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < u0.size(); ++j) s += basis.phi(j, k) * u0[j];
    a0[k] = s;
  }
  return a0;
}

namespace detail {

/// Reduced right-hand side:
///   rhs = -phi_t * ((phi a) .* g) + nu * diff_op * a + q_proj
/// where g_j reconstructs the convection derivative with the same
/// flow-direction-adaptive stencil as the full solver: the upwind-side
/// derivative where the reconstructed field is non-negative, the mirror
/// where it is negative. The convection product is omitted for
/// scheme = None. u_buf/gb_buf/gf_buf are m-sized scratch vectors.
inline void rom_rhs_into(const std::vector<double>& a, const RomOperators& ops,
                         std::vector<double>& u_buf,
                         std::vector<double>& gb_buf,
                         std::vector<double>& gf_buf,
                         std::vector<double>& out) {
  const std::size_t m = ops.grid_points();
  const std::size_t i = ops.modes();
  const bool convective = ops.scheme != ConvectionScheme::None;

  if (convective) {
    for (std::size_t k = 0; k < i; ++k) {
      const double ak = a[k];
      const double* pt = ops.phi_t.row(k);
      const double* xb = ops.phi_x_t.row(k);
      const double* xf = ops.phi_x_fwd_t.row(k);
      if (k == 0) {
        for (std::size_t j = 0; j < m; ++j) {
          u_buf[j] = ak * pt[j];
          gb_buf[j] = ak * xb[j];
          gf_buf[j] = ak * xf[j];
        }
      } else {
        for (std::size_t j = 0; j < m; ++j) {
          u_buf[j] += ak * pt[j];
          gb_buf[j] += ak * xb[j];
          gf_buf[j] += ak * xf[j];
        }
      }
    }
    // Pointwise U * dU/dx with the direction-selected derivative.
    for (std::size_t j = 0; j < m; ++j) {
      u_buf[j] *= u_buf[j] >= 0.0 ? gb_buf[j] : gf_buf[j];
    }
  }

  for (std::size_t k = 0; k < i; ++k) {
    double conv = 0.0;
    if (convective) {
      const double* trow = ops.phi_t.row(k);
      for (std::size_t j = 0; j < m; ++j) conv += trow[j] * u_buf[j];
    }
    const double* drow = ops.diff_op.row(k);
    double diff = 0.0;
    for (std::size_t l = 0; l < i; ++l) diff += drow[l] * a[l];
    out[k] = -conv + ops.nu * diff + ops.q_proj[k];
  }
}

/// Workspace for the RK4 march.
struct Rk4Workspace {
  std::vector<double> k1, k2, k3, k4, stage, u_buf, gb_buf, gf_buf;
  explicit Rk4Workspace(std::size_t i, std::size_t m)
      : k1(i), k2(i), k3(i), k4(i), stage(i), u_buf(m), gb_buf(m), gf_buf(m) {}
};

/// One classical RK4 step of size h, y -> y_next. k1 is also an output so a
/// caller can reuse it for dense output.
inline void rk4_step(std::vector<double>& y, double h, const RomOperators& ops,
                     Rk4Workspace& ws) {
  const std::size_t i = y.size();
  rom_rhs_into(y, ops, ws.u_buf, ws.gb_buf, ws.gf_buf, ws.k1);
  for (std::size_t k = 0; k < i; ++k) ws.stage[k] = y[k] + 0.5 * h * ws.k1[k];
  rom_rhs_into(ws.stage, ops, ws.u_buf, ws.gb_buf, ws.gf_buf, ws.k2);
  for (std::size_t k = 0; k < i; ++k) ws.stage[k] = y[k] + 0.5 * h * ws.k2[k];
  rom_rhs_into(ws.stage, ops, ws.u_buf, ws.gb_buf, ws.gf_buf, ws.k3);
  for (std::size_t k = 0; k < i; ++k) ws.stage[k] = y[k] + h * ws.k3[k];
  rom_rhs_into(ws.stage, ops, ws.u_buf, ws.gb_buf, ws.gf_buf, ws.k4);
  for (std::size_t k = 0; k < i; ++k) {
    y[k] += h / 6.0 * (ws.k1[k] + 2.0 * (ws.k2[k] + ws.k3[k]) + ws.k4[k]);
  }
}

}  // namespace detail

/// Reduced right-hand side at state a (allocating convenience wrapper).
inline std::vector<double> rhs(const std::vector<double>& a,
                               const RomOperators& ops) {
  if (a.size() != ops.modes()) {
    throw ShapeError("rhs: state has " + std::to_string(a.size()) +
                     " entries, operators expect " +
                     std::to_string(ops.modes()));
  }
  std::vector<double> u_buf(ops.grid_points()), gb_buf(ops.grid_points()),
      gf_buf(ops.grid_points());
  std::vector<double> out(ops.modes());
  detail::rom_rhs_into(a, ops, u_buf, gb_buf, gf_buf, out);
  if (!detail::all_finite(out)) {
    throw BlowUpError("non-finite reduced rhs", 0, 0.0);
  }
  return out;
}

namespace detail {

struct MarchPlan {
  long steps = 0;
  double h = 0.0;
};

inline MarchPlan march_plan(const RomOperators& ops,
                            const std::vector<double>& times) {
  if (times.size() < 2) throw ContractError("integrate: need at least 2 times");
  if (times.front() != 0.0) {
    throw ContractError("integrate: times must start at 0");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] <= times[k - 1]) {
      throw ContractError("integrate: times must be strictly increasing");
    }
  }
  double dt = ops.dt > 0.0 ? ops.dt : times[1] - times[0];
  const std::size_t sub = ops.substep < 1 ? 1 : ops.substep;
  const double span = times.back() - times.front();
  const double h0 = dt * static_cast<double>(sub);
  long steps = static_cast<long>(std::ceil(span / h0 - 1.0e-9));
  if (steps < 1) steps = 1;
  return {steps, span / static_cast<double>(steps)};
}

// One timing measurement runs the march this many times and divides, to get
// above the clock's noise floor (matches the full-order solver's protocol).
constexpr int kRomTimingPasses = 8;

}  // namespace detail

/// Per-pass wall time of the RK4 march, without sample extraction.
inline double time_integration_loop(const RomOperators& ops,
                                    const std::vector<double>& a0,
                                    const std::vector<double>& times) {
  const auto plan = detail::march_plan(ops, times);
  detail::Rk4Workspace ws(ops.modes(), ops.grid_points());
  std::vector<double> z(a0.size());
  const double h = plan.h;
  const auto start = std::chrono::steady_clock::now();
  for (int pass = 0; pass < detail::kRomTimingPasses; ++pass) {
    z = a0;
    for (long s = 1; s <= plan.steps; ++s) {
      const double t1 =
          s == plan.steps ? times.back() : static_cast<double>(s) * h;
      detail::rk4_step(z, t1 - static_cast<double>(s - 1) * h, ops, ws);
      if (!detail::all_finite(z)) {
        throw BlowUpError("reduced model blew up", s, t1);
      }
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count() /
         detail::kRomTimingPasses;
}

/// Integrates the reduced ODE with fixed-step classical RK4 from a0 over the
/// given sample times. With substep = 1 (the default) the internal step
/// equals the full-order dt, so every sample lands on a step boundary;
/// larger substeps fill interior samples by cubic Hermite dense output.
inline IntegrateResult integrate(const RomOperators& ops,
                                 const std::vector<double>& a0,
                                 const std::vector<double>& times) {
  if (a0.size() != ops.modes()) {
    throw ShapeError("integrate: a0 has " + std::to_string(a0.size()) +
                     " entries, operators expect " +
                     std::to_string(ops.modes()));
  }
  const auto plan = detail::march_plan(ops, times);
  const std::size_t i = ops.modes();
  const std::size_t n = times.size();

  IntegrateResult res;
  res.trajectory.times = times;
  res.trajectory.a = DenseMatrix(i, n);

  detail::Rk4Workspace ws(i, ops.grid_points());
  std::vector<double> y = a0;
  std::vector<double> y_prev(i), f_end(i);

  auto store = [&](std::size_t col, const std::vector<double>& v) {
    for (std::size_t k = 0; k < i; ++k) res.trajectory.a(k, col) = v[k];
  };

  store(0, y);
  std::size_t next_sample = 1;
  const double h = plan.h;
  for (long s = 1; s <= plan.steps && next_sample < n; ++s) {
    const double t0 = static_cast<double>(s - 1) * h;
    const double t1 = s == plan.steps ? times.back() : static_cast<double>(s) * h;
    y_prev = y;
    detail::rk4_step(y, t1 - t0, ops, ws);
    if (!detail::all_finite(y)) {
      throw BlowUpError("reduced model blew up", s, t1);
    }

    bool have_f_end = false;
    while (next_sample < n && times[next_sample] <= t1 + 1.0e-9 * h) {
      const double tau = times[next_sample];
      if (std::abs(tau - t1) <= 1.0e-9 * h) {
        store(next_sample, y);
      } else {
        // Cubic Hermite between (t0, y_prev, k1) and (t1, y, f(y)).
        if (!have_f_end) {
          detail::rom_rhs_into(y, ops, ws.u_buf, ws.gb_buf, ws.gf_buf, f_end);
          have_f_end = true;
        }
        const double hh = t1 - t0;
        const double th = (tau - t0) / hh;
        const double th2 = th * th, th3 = th2 * th;
        const double c0 = 1.0 - 3.0 * th2 + 2.0 * th3;
        const double c1 = 3.0 * th2 - 2.0 * th3;
        const double d0 = hh * (th - 2.0 * th2 + th3);
        const double d1 = hh * (th3 - th2);
        for (std::size_t k = 0; k < i; ++k) {
          ws.stage[k] =
              c0 * y_prev[k] + c1 * y[k] + d0 * ws.k1[k] + d1 * f_end[k];
        }
        store(next_sample, ws.stage);
      }
      ++next_sample;
    }
  }
  if (next_sample < n) {
    throw ContractError("integrate: failed to reach all sample times");
  }

  res.wall_time = time_integration_loop(ops, a0, times);
  return res;
}

/// U_ROM(:, k) = phi * a(:, k); times are copied from the trajectory.
inline SnapshotMatrix reconstruct(const PodBasis& basis,
                                  const RomTrajectory& traj, const Grid& grid) {
  if (traj.a.rows() != basis.mode_count) {
    throw ShapeError("reconstruct: trajectory has " +
                     std::to_string(traj.a.rows()) + " modes, basis has " +
                     std::to_string(basis.mode_count));
  }
  if (basis.phi.rows() != grid.m) {
    throw ShapeError("reconstruct: basis rows do not match grid");
  }
  SnapshotMatrix out;
  out.grid = grid;
  out.times = traj.times;
  out.data = matmul(basis.phi, traj.a);
  return out;
}

}  // namespace podrom
