// Command-line front end: runs the benchmark cases end to end
// (simulate -> POD -> reduced model -> comparison) and writes CSV artifacts.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "podrom/podrom.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;

void print_report(const podrom::ComparisonReport& rep) {
  std::printf("case %d: t_sim %.3e s\n", rep.case_id, rep.t_sim);
  for (const auto& r : rep.records) {
    if (r.failed) {
      std::printf("  i=%-3zu FAILED: %s\n", r.modes, r.message.c_str());
    } else {
      std::printf(
          "  i=%-3zu max %% err %.4g  mean %% err %.4g  t_rom %.3e s  "
          "t_ratio %.3g  energy %.6f\n",
          r.modes, r.max_pct_error, r.mean_pct_error, r.t_rom, r.t_ratio,
          r.captured_energy);
    }
  }
}

bool any_failure(const podrom::ComparisonReport& rep) {
  for (const auto& r : rep.records) {
    if (r.failed) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference Burgers solver with a POD-Galerkin reduced-order model"};
  app.require_subcommand(1);

  int case_id = 0;
  std::string config_path;
  std::string out_dir;
  std::string modes_arg;
  std::size_t stride = 0;
  std::size_t substep = 0;

  CLI::App* run = app.add_subcommand("run", "run a single case");
  auto* case_opt = run->add_option("--case", case_id, "preset case id (1..6)");
  auto* cfg_opt =
      run->add_option("--config", config_path, "key=value config file");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--modes", modes_arg, "comma-separated mode counts override");
  run->add_option("--stride", stride, "snapshot stride override");
  run->add_option("--substep", substep, "reduced integrator substep override");
  case_opt->excludes(cfg_opt);

  std::string all_out;
  CLI::App* run_all_cmd = app.add_subcommand("run-all", "run all six cases");
  run_all_cmd->add_option("--out", all_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_all_cmd->parsed()) {
      const auto reports = podrom::run_all(all_out);
      bool failed = false;
      for (const auto& rep : reports) {
        print_report(rep);
        failed = failed || any_failure(rep);
      }
      std::printf("wrote %s\n", (std::filesystem::path(all_out) / "timing_summary.csv")
                                    .string().c_str());
      return failed ? kExitBlowUp : kExitOk;
    }

    podrom::CaseSpec spec;
    if (cfg_opt->count() > 0) {
      spec = podrom::parse_config_file(config_path);
    } else if (case_opt->count() > 0) {
      spec = podrom::case_preset(case_id);
    } else {
      std::fprintf(stderr, "error: need --case or --config\n");
      return kExitConfig;
    }
    if (!modes_arg.empty()) {
      spec.mode_counts.clear();
      std::stringstream ss(modes_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          spec.mode_counts.push_back(std::stoul(tok));
        } catch (const std::exception&) {
          throw podrom::ConfigError("bad --modes entry '" + tok + "'");
        }
      }
      if (spec.mode_counts.empty()) {
        throw podrom::ConfigError("--modes list is empty");
      }
    }
    if (stride > 0) spec.config.snapshot_stride = stride;
    if (substep > 0) spec.rom_substep = substep;

    const std::filesystem::path out =
        spec.id > 0
            ? std::filesystem::path(out_dir) / ("case" + std::to_string(spec.id))
            : std::filesystem::path(out_dir) / "custom";
    const auto rep = podrom::run_case(spec, out);
    print_report(rep);
    return any_failure(rep) ? kExitBlowUp : kExitOk;
  } catch (const podrom::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const podrom::BlowUpError& e) {
    std::fprintf(stderr, "numerical blow-up: %s\n", e.what());
    return kExitBlowUp;
  } catch (const podrom::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBlowUp;
  }
}
