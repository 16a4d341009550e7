#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "podrom/errors.hpp"
#include "podrom/grid.hpp"
#include "podrom/linalg.hpp"

namespace podrom {

/// Full-order simulation parameters.
///
/// u_ref is the reference velocity for the convective CFL bound; it is held
/// fixed for the whole run so dt never changes. u_ref = 0 disables the
/// convective bound (pure-diffusion stepping).
struct SimConfig {
  std::size_t m = 32;
  double t_final = 0.5;
  double cfl = 0.2;
  double nu = 0.01;
  double u0_amp = 0.01;
  double q0_amp = 0.1;
  ConvectionScheme scheme = ConvectionScheme::Upwind2;
  std::size_t snapshot_stride = 1;
  double u_ref = 1.0;
};

inline void validate(const SimConfig& c) {
  if (c.t_final <= 0.0) throw ConfigError("t_final must be positive");
  if (c.cfl <= 0.0) throw ConfigError("cfl must be positive");
  if (c.nu < 0.0) throw ConfigError("nu must be non-negative");
  if (c.u_ref < 0.0) throw ConfigError("u_ref must be non-negative");
  if (c.snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
  if (c.m < 4) throw ConfigError("m must be at least 4");
}

/// Field history U(x, t): column k is the field at times[k].
struct SnapshotMatrix {
  DenseMatrix data;           // m x n
  std::vector<double> times;  // n, strictly increasing, times[0] = 0
  Grid grid;
};

struct SimResult {
  SnapshotMatrix snapshots;
  double wall_time = 0.0;  // seconds, arithmetic stepping loop only
  long steps = 0;
  double dt = 0.0;
};

/// U(x, 0) = u0_amp * sin(x).
inline Field initial_field(const Grid& grid, double u0_amp) {
  Field f(grid.m);
  for (std::size_t j = 0; j < grid.m; ++j) f[j] = u0_amp * std::sin(grid.x[j]);
  return f;
}

/// Q(x) = q0_amp * sin(x), held constant in time.
inline Field source_field(const Grid& grid, double q0_amp) {
  Field f(grid.m);
  for (std::size_t j = 0; j < grid.m; ++j) f[j] = q0_amp * std::sin(grid.x[j]);
  return f;
}

namespace detail {

struct StepScratch {
  Field conv_bwd, conv_fwd, diff;
  explicit StepScratch(std::size_t m) : conv_bwd(m), conv_fwd(m), diff(m) {}
};

/// One forward-Euler step into `out`, using preallocated stencil scratch.
///
/// The one-sided convection stencil follows the local flow direction:
/// backward differencing where u_j >= 0, the mirrored forward stencil where
/// u_j < 0. On a non-negative field this is plain backward upwinding; a
/// one-sided stencil against the flow is absolutely unstable, so the switch
/// is what lets sign-changing fields run. scheme = None omits the convection
/// term entirely.
inline void euler_step_into(const Field& u, double dt, double nu,
                            const Field& q, const Grid& grid,
                            ConvectionScheme scheme, StepScratch& ws,
                            Field& out) {
  const std::size_t m = grid.m;
  central2_into(u, grid, ws.diff);
  switch (scheme) {
    case ConvectionScheme::Upwind2:
      upwind2_into(u, grid, ws.conv_bwd);
      forward2_into(u, grid, ws.conv_fwd);
      break;
    case ConvectionScheme::Upwind1:
      upwind1_into(u, grid, ws.conv_bwd);
      forward1_into(u, grid, ws.conv_fwd);
      break;
    case ConvectionScheme::None:
      for (std::size_t j = 0; j < m; ++j) {
        out[j] = u[j] + dt * (nu * ws.diff[j] + q[j]);
      }
      return;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double conv = u[j] >= 0.0 ? ws.conv_bwd[j] : ws.conv_fwd[j];
    out[j] = u[j] + dt * (-u[j] * conv + nu * ws.diff[j] + q[j]);
  }
}

inline bool all_finite(const Field& f) {
  for (double v : f) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace detail

/// Single explicit Euler step of dU/dt = -U U_x + nu U_xx + Q, with
/// flow-direction-adaptive one-sided convection (see euler_step_into).
/// `step` is only used to label a blow-up error.
inline Field euler_step(const Field& u, double dt, double nu, const Field& q,
                        const Grid& grid, ConvectionScheme scheme,
                        long step = 0) {
  check_field(u, grid, "state");
  check_field(q, grid, "source");
  if (dt <= 0.0) throw TimestepError("euler_step: dt must be positive");
  detail::StepScratch ws(grid.m);
  Field out(grid.m);
  detail::euler_step_into(u, dt, nu, q, grid, scheme, ws, out);
  if (!detail::all_finite(out)) {
    throw BlowUpError("non-finite field after euler step", step,
                      static_cast<double>(step) * dt);
  }
  return out;
}

namespace detail {

/// Derives the fixed step: dt from the CFL bounds, then shrunk so that
/// steps * dt == t_final with an integer step count.
inline std::pair<long, double> step_plan(const SimConfig& c, const Grid& grid) {
  const double dt0 = cfl_timestep(grid, c.u_ref, c.nu, c.cfl);
  long steps = static_cast<long>(std::ceil(c.t_final / dt0));
  if (steps < 1) steps = 1;
  return {steps, c.t_final / static_cast<double>(steps)};
}

// Short loops sit at the clock's noise floor, so one timing measurement runs
// the loop this many times back to back and divides.
constexpr int kTimingPasses = 8;

/// Per-pass wall time of the stepping loop, without snapshot storage.
inline double run_timed_loop(const SimConfig& c, const Grid& grid,
                             const Field& u0, const Field& q, long steps,
                             double dt) {
  Field u(grid.m);
  Field next(grid.m);
  StepScratch ws(grid.m);
  const auto start = std::chrono::steady_clock::now();
  for (int pass = 0; pass < kTimingPasses; ++pass) {
    u = u0;
    for (long s = 1; s <= steps; ++s) {
      euler_step_into(u, dt, c.nu, q, grid, c.scheme, ws, next);
      if (!all_finite(next)) {
        throw BlowUpError("simulation blew up", s, static_cast<double>(s) * dt);
      }
      u.swap(next);
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count() / kTimingPasses;
}

}  // namespace detail

/// Full-order solve. Snapshots are taken at t = 0, every snapshot_stride-th
/// step, and at t_final. The reported wall time covers a re-run of the
/// arithmetic stepping loop without snapshot copies.
inline SimResult simulate(const SimConfig& c) {
  validate(c);
  const Grid grid = make_grid(c.m);
  const Field u0 = initial_field(grid, c.u0_amp);
  const Field q = source_field(grid, c.q0_amp);
  const auto [steps, dt] = detail::step_plan(c, grid);

  std::vector<long> saved_steps;
  saved_steps.push_back(0);
  for (long s = static_cast<long>(c.snapshot_stride); s < steps;
       s += static_cast<long>(c.snapshot_stride)) {
    saved_steps.push_back(s);
  }
  saved_steps.push_back(steps);

  SimResult res;
  res.steps = steps;
  res.dt = dt;
  res.snapshots.grid = grid;
  res.snapshots.data = DenseMatrix(grid.m, saved_steps.size());
  res.snapshots.times.resize(saved_steps.size());

  Field u = u0;
  Field next(grid.m);
  detail::StepScratch ws(grid.m);
  std::size_t col = 0;
  auto save = [&](const Field& f, double t) {
    for (std::size_t j = 0; j < grid.m; ++j) res.snapshots.data(j, col) = f[j];
    res.snapshots.times[col] = t;
    ++col;
  };
  save(u, 0.0);
  for (long s = 1; s <= steps; ++s) {
    detail::euler_step_into(u, dt, c.nu, q, grid, c.scheme, ws, next);
    if (!detail::all_finite(next)) {
      throw BlowUpError("simulation blew up", s, static_cast<double>(s) * dt);
    }
    u.swap(next);
    if (s == saved_steps[col]) {
      save(u, s == steps ? c.t_final : static_cast<double>(s) * dt);
    }
  }

  res.wall_time = detail::run_timed_loop(c, grid, u0, q, steps, dt);
  return res;
}

/// One extra timing repetition of the stepping loop (for median-of-k
/// protocols). Identical arithmetic to simulate()'s loop.
inline double time_simulation_loop(const SimConfig& c) {
  validate(c);
  const Grid grid = make_grid(c.m);
  const Field u0 = initial_field(grid, c.u0_amp);
  const Field q = source_field(grid, c.q0_amp);
  const auto [steps, dt] = detail::step_plan(c, grid);
  return detail::run_timed_loop(c, grid, u0, q, steps, dt);
}

}  // namespace podrom
