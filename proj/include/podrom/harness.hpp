#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "podrom/csv.hpp"
#include "podrom/errors.hpp"
#include "podrom/fdsolver.hpp"
#include "podrom/pod.hpp"
#include "podrom/rom.hpp"

namespace podrom {

// ===========================================================================
// Case presets and run configuration.
// ===========================================================================

/// One benchmark case: a simulation config plus the mode counts to evaluate.
/// rom_substep coarsens the reduced integrator for this case (see
/// RomOperators); every preset keeps it at 1 except case 2.
struct CaseSpec {
  int id = 0;  // 1..6 for presets, 0 for custom configs
  SimConfig config;
  std::vector<std::size_t> mode_counts{1, 5};
  std::size_t rom_substep = 1;
};

/// The six built-in cases. Shared parameters: m = 32, CFL = 0.2,
/// U0 = 0.01, Q0 = 0.1, unit CFL reference velocity, stride 1.
inline CaseSpec case_preset(int id) {
  CaseSpec spec;
  spec.id = id;
  SimConfig& c = spec.config;
  switch (id) {
    case 1:  // high diffusivity, short run
      c.t_final = 0.5;
      c.nu = 0.01;
      spec.mode_counts = {1, 5};
      break;
    case 2:  // high diffusivity, long run; reduced model steps 16x coarser
      c.t_final = 5.0;
      c.nu = 0.01;
      spec.mode_counts = {1, 5};
      spec.rom_substep = 16;
      break;
    case 3:  // low diffusivity, short run
      c.t_final = 0.5;
      c.nu = 1.0e-4;
      spec.mode_counts = {1, 5};
      break;
    case 4:  // low diffusivity, long run
      c.t_final = 15.0;
      c.nu = 1.0e-4;
      spec.mode_counts = {5, 30};
      break;
    case 5:  // heat equation (no convection), very low diffusivity
      c.t_final = 50.0;
      c.nu = 1.0e-5;
      c.scheme = ConvectionScheme::None;
      spec.mode_counts = {1, 3};
      break;
    case 6:  // first-order upwind convection, long run
      c.t_final = 15.0;
      c.nu = 1.0e-4;
      c.scheme = ConvectionScheme::Upwind1;
      spec.mode_counts = {5, 10};
      break;
    default:
      throw ConfigError("unknown case id " + std::to_string(id) +
                        " (expected 1..6)");
  }
  return spec;
}

/// Parses a flat key=value config file. Lines starting with '#' and blank
/// lines are ignored. Unknown keys are an error.
inline CaseSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  auto trim = [](std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
  };
  auto to_double = [&](const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
    }
  };
  auto to_count = [&](const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d < 0.0 || d != std::floor(d)) {
      throw ConfigError("bad count for " + key + ": '" + v + "'");
    }
    return static_cast<std::size_t>(d);
  };

  CaseSpec spec;
  spec.id = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key=value, got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "m") {
      spec.config.m = to_count(key, value);
    } else if (key == "t_final") {
      spec.config.t_final = to_double(key, value);
    } else if (key == "cfl") {
      spec.config.cfl = to_double(key, value);
    } else if (key == "nu") {
      spec.config.nu = to_double(key, value);
    } else if (key == "u0_amp") {
      spec.config.u0_amp = to_double(key, value);
    } else if (key == "q0_amp") {
      spec.config.q0_amp = to_double(key, value);
    } else if (key == "u_ref") {
      spec.config.u_ref = to_double(key, value);
    } else if (key == "snapshot_stride") {
      spec.config.snapshot_stride = to_count(key, value);
    } else if (key == "rom_substep") {
      spec.rom_substep = to_count(key, value);
    } else if (key == "scheme") {
      if (value == "upwind2") {
        spec.config.scheme = ConvectionScheme::Upwind2;
      } else if (value == "upwind1") {
        spec.config.scheme = ConvectionScheme::Upwind1;
      } else if (value == "none") {
        spec.config.scheme = ConvectionScheme::None;
      } else {
        throw ConfigError("bad scheme '" + value +
                          "' (expected upwind2|upwind1|none)");
      }
    } else if (key == "modes") {
      spec.mode_counts.clear();
      std::stringstream ss(value);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        spec.mode_counts.push_back(to_count("modes", trim(tok)));
      }
      if (spec.mode_counts.empty()) throw ConfigError("modes list is empty");
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  for (std::size_t i : spec.mode_counts) {
    if (i < 1) throw ConfigError("mode counts must be >= 1");
  }
  return spec;
}

// ===========================================================================
// Error metric and reports.
// ===========================================================================

/// Percentage error field, normalized by the global max |u_sim|:
/// e_jk = 100 * (u_rom_jk - u_sim_jk) / max|u_sim|.
inline DenseMatrix percent_error(const SnapshotMatrix& u_rom,
                                 const SnapshotMatrix& u_sim) {
  if (u_rom.data.rows() != u_sim.data.rows() ||
      u_rom.data.cols() != u_sim.data.cols()) {
    throw ShapeError("percent_error: snapshot shapes differ");
  }
  if (u_rom.times != u_sim.times) {
    throw ShapeError("percent_error: snapshot times differ");
  }
  const double norm = max_abs(u_sim.data);
  if (norm == 0.0) {
    throw NormalizationError("percent_error: reference solution is all zero");
  }
  DenseMatrix e(u_sim.data.rows(), u_sim.data.cols());
  const double s = 100.0 / norm;
  for (std::size_t r = 0; r < e.rows(); ++r) {
    for (std::size_t c = 0; c < e.cols(); ++c) {
      e(r, c) = s * (u_rom.data(r, c) - u_sim.data(r, c));
    }
  }
  return e;
}

struct ModeRecord {
  std::size_t modes = 0;
  double max_pct_error = 0.0;
  double mean_pct_error = 0.0;
  double t_sim = 0.0;
  double t_rom = 0.0;
  double t_ratio = 0.0;
  double captured_energy = 0.0;
  bool failed = false;
  std::string message;
};

struct ComparisonReport {
  int case_id = 0;
  std::vector<ModeRecord> records;
  std::vector<double> sigma;
  EnergySpectrum spectrum_sq;   // SigmaSquared
  EnergySpectrum spectrum_lin;  // SigmaLinear
  double t_sim = 0.0;           // median over repetitions
  std::vector<std::string> files;
};

namespace detail {

inline double median3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

inline std::string time_label(double t) { return "t=" + format_double(t); }

inline void write_field_history_csv(const std::string& path,
                                    const Grid& grid,
                                    const DenseMatrix& data,
                                    const std::vector<double>& times) {
  CsvRows rows;
  std::vector<std::string> header;
  header.push_back("x");
  for (double t : times) header.push_back(time_label(t));
  rows.push_back(std::move(header));
  for (std::size_t j = 0; j < grid.m; ++j) {
    std::vector<std::string> row;
    row.push_back(format_double(grid.x[j]));
    for (std::size_t k = 0; k < data.cols(); ++k) {
      row.push_back(format_double(data(j, k)));
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, rows);
}

}  // namespace detail

/// Evaluates one reduced model against the full-order snapshots. Everything
/// downstream of the POD basis lives here so run_case and the extra table
/// rows share one code path. Timing repetitions of the solver and the
/// reduced march are interleaved back to back so a shift in machine state
/// hits both sides of the ratio alike.
inline ModeRecord evaluate_rom(const SvdFactors& factors,
                               const SimResult& sim, const SimConfig& config,
                               std::size_t modes, std::size_t substep,
                               DenseMatrix* error_out = nullptr,
                               SnapshotMatrix* rom_out = nullptr) {
  ModeRecord rec;
  rec.modes = modes;
  try {
    const Grid& grid = sim.snapshots.grid;
    const PodBasis basis = truncate(factors, modes);
    rec.captured_energy = basis.captured_energy;
    RomOperators ops = assemble(basis, grid, config.nu,
                                source_field(grid, config.q0_amp),
                                config.scheme);
    ops.dt = sim.dt;
    ops.substep = substep;
    const std::vector<double> a0 =
        project_initial(basis, initial_field(grid, config.u0_amp));
    IntegrateResult ires = integrate(ops, a0, sim.snapshots.times);
    double ts[3], tr[3];
    for (int rep = 0; rep < 3; ++rep) {
      ts[rep] = time_simulation_loop(config);
      tr[rep] = time_integration_loop(ops, a0, sim.snapshots.times);
    }
    rec.t_sim = detail::median3(ts[0], ts[1], ts[2]);
    rec.t_rom = detail::median3(tr[0], tr[1], tr[2]);
    rec.t_ratio = rec.t_rom / rec.t_sim;

    const SnapshotMatrix u_rom = reconstruct(basis, ires.trajectory, grid);
    const DenseMatrix err = percent_error(u_rom, sim.snapshots);
    double mx = 0.0, mean = 0.0;
    for (double e : err.entries()) {
      mx = std::max(mx, std::abs(e));
      mean += std::abs(e);
    }
    rec.max_pct_error = mx;
    rec.mean_pct_error = mean / static_cast<double>(err.entries().size());
    if (error_out) *error_out = err;
    if (rom_out) *rom_out = u_rom;
  } catch (const Error& e) {
    rec.failed = true;
    rec.message = e.what();
  }
  return rec;
}

/// Full pipeline for one case: simulate, factor, then run every requested
/// mode count. CSV artifacts land in out_dir. Per-mode failures are recorded
/// and the remaining mode counts still run.
inline ComparisonReport run_case(const CaseSpec& spec,
                                 const std::filesystem::path& out_dir) {
  validate(spec.config);
  std::filesystem::create_directories(out_dir);

  ComparisonReport report;
  report.case_id = spec.id;

  const SimResult sim = simulate(spec.config);
  report.t_sim = detail::median3(sim.wall_time,
                                 time_simulation_loop(spec.config),
                                 time_simulation_loop(spec.config));

  const SvdFactors factors = svd(sim.snapshots.data);
  report.sigma = factors.sigma;
  report.spectrum_sq =
      energy_spectrum(factors.sigma, EnergyConvention::SigmaSquared);
  report.spectrum_lin =
      energy_spectrum(factors.sigma, EnergyConvention::SigmaLinear);

  auto emit = [&](const std::string& name, auto&& writer) {
    const std::string path = (out_dir / name).string();
    writer(path);
    report.files.push_back(path);
  };

  emit("snapshots_sim.csv", [&](const std::string& p) {
    detail::write_field_history_csv(p, sim.snapshots.grid, sim.snapshots.data,
                                    sim.snapshots.times);
  });
  emit("energy.csv", [&](const std::string& p) {
    CsvRows rows;
    rows.push_back({"mode", "sigma", "r_sq", "r_lin", "cumulative_sq"});
    for (std::size_t k = 0; k < report.sigma.size(); ++k) {
      rows.push_back({std::to_string(k + 1), format_double(report.sigma[k]),
                      format_double(report.spectrum_sq.r[k]),
                      format_double(report.spectrum_lin.r[k]),
                      format_double(report.spectrum_sq.cumulative[k])});
    }
    write_csv(p, rows);
  });

  for (std::size_t modes : spec.mode_counts) {
    DenseMatrix err;
    SnapshotMatrix u_rom;
    ModeRecord rec = evaluate_rom(factors, sim, spec.config, modes,
                                  spec.rom_substep, &err, &u_rom);
    if (!rec.failed) {
      const std::string suffix = "_i" + std::to_string(modes) + ".csv";
      emit("snapshots_rom" + suffix, [&](const std::string& p) {
        detail::write_field_history_csv(p, u_rom.grid, u_rom.data, u_rom.times);
      });
      emit("error" + suffix, [&](const std::string& p) {
        detail::write_field_history_csv(p, sim.snapshots.grid, err,
                                        sim.snapshots.times);
      });
    }
    report.records.push_back(std::move(rec));
  }

  emit("summary.csv", [&](const std::string& p) {
    CsvRows rows;
    rows.push_back({"case", "i", "max_pct_error", "mean_pct_error", "t_sim",
                    "t_rom", "t_ratio", "captured_energy"});
    for (const ModeRecord& r : report.records) {
      if (r.failed) {
        rows.push_back({std::to_string(report.case_id),
                        std::to_string(r.modes), "failed", "failed",
                        format_double(r.t_sim), "failed", "failed",
                        format_double(r.captured_energy)});
      } else {
        rows.push_back({std::to_string(report.case_id),
                        std::to_string(r.modes), format_double(r.max_pct_error),
                        format_double(r.mean_pct_error), format_double(r.t_sim),
                        format_double(r.t_rom), format_double(r.t_ratio),
                        format_double(r.captured_energy)});
      }
    }
    write_csv(p, rows);
  });

  return report;
}

/// Runs all six presets into out_dir/case<k>/ and writes the timing summary
/// (one row per preset (case, i) pair; case 5 has no reference timing).
/// Case 4 is additionally evaluated at i = 20 and i = 33, reported in
/// timing_extras.csv.
inline std::vector<ComparisonReport> run_all(
    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<ComparisonReport> reports;
  CsvRows timing;
  timing.push_back({"case", "i", "t_ratio", "note"});
  CsvRows extras;
  extras.push_back({"case", "i", "t_ratio", "note"});

  for (int id = 1; id <= 6; ++id) {
    const CaseSpec spec = case_preset(id);
    ComparisonReport rep;
    try {
      rep = run_case(spec, out_dir / ("case" + std::to_string(id)));
    } catch (const Error& e) {
      // Whole-case failure (e.g. the full-order run blew up): record every
      // requested mode count as failed and keep going.
      rep.case_id = id;
      for (std::size_t modes : spec.mode_counts) {
        ModeRecord r;
        r.modes = modes;
        r.failed = true;
        r.message = e.what();
        rep.records.push_back(std::move(r));
      }
    }
    for (const ModeRecord& r : rep.records) {
      timing.push_back({std::to_string(id), std::to_string(r.modes),
                        r.failed ? "failed" : format_double(r.t_ratio),
                        id == 5 ? "no reference timing" : ""});
    }

    if (id == 4) {
      // Extra case-4 mode counts carried in the reference timing comparison.
      try {
        const SimResult sim = simulate(spec.config);
        const SvdFactors factors = svd(sim.snapshots.data);
        for (std::size_t modes : {std::size_t{20}, std::size_t{33}}) {
          ModeRecord rec = evaluate_rom(factors, sim, spec.config, modes,
                                        spec.rom_substep);
          extras.push_back({"4", std::to_string(modes),
                            rec.failed ? "failed" : format_double(rec.t_ratio),
                            rec.failed ? rec.message : ""});
        }
      } catch (const Error& e) {
        for (std::size_t modes : {std::size_t{20}, std::size_t{33}}) {
          extras.push_back({"4", std::to_string(modes), "failed", e.what()});
        }
      }
    }
    reports.push_back(std::move(rep));
  }

  write_csv((out_dir / "timing_summary.csv").string(), timing);
  write_csv((out_dir / "timing_extras.csv").string(), extras);
  return reports;
}

}  // namespace podrom
