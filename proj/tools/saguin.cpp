#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "saguin/saguin.hpp"

#ifndef SAGUIN_PROFILE_DIR
#define SAGUIN_PROFILE_DIR "profiles"
#endif

namespace {

enum Exit { ok = 0, config_error = 2, calibration_infeasible = 3, partial = 4 };

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  std::string energy_profile;
  std::string toa_source;
  std::string interference;
};

saguin::ExperimentConfig build_config(const Flags& f) {
  using namespace saguin;
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_experiment_config(f.config);
  if (f.seed) apply_master_seed(cfg, *f.seed);
  if (f.trials) cfg.scenario.trials = *f.trials;
  if (!f.out.empty()) cfg.output_path = f.out;
  if (!f.energy_profile.empty()) {
    cfg.profile_name = f.energy_profile;
    cfg.inline_profile.clear();
  }
  if (!f.toa_source.empty()) cfg.scenario.toa_source = *parse_toa_source(f.toa_source);
  if (!f.interference.empty()) cfg.scenario.interference = *parse_interference(f.interference);
  resolve_energy_profile(cfg, SAGUIN_PROFILE_DIR);
  if (!cfg.output_path.empty()) {
    const auto parent = std::filesystem::path(cfg.output_path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
      throw ConfigError(fmt::format("output directory '{}' does not exist", parent.string()));
  }
  return cfg;
}

int emit(const saguin::ResultTable& table, const saguin::ExperimentConfig& cfg) {
  if (cfg.output_path.empty())
    saguin::write_csv(std::cout, table, cfg);
  else
    saguin::write_csv(cfg.output_path, table, cfg);
  for (const auto& r : table.rejected) fmt::print(stderr, "rejected: {}\n", r);
  return table.rejected.empty() ? ok : partial;
}

std::string years(const saguin::LifetimeResult& r) {
  return r.lifetime_years ? fmt::format("{:.4f} y", *r.lifetime_years) : "ENERGY_NEUTRAL";
}

int dispatch(const std::string& command, const saguin::ExperimentConfig& cfg) {
  using namespace saguin;
  if (command == "fig3") return emit(run_fig3(cfg), cfg);
  if (command == "fig4") return emit(run_fig4(cfg), cfg);
  if (command == "fig5") return emit(run_fig5(cfg), cfg);
  if (command == "toa-table") return emit(run_toa_table(cfg), cfg);
  if (command == "run") {
    SingleRun r;
    const auto table = run_single(cfg, &r);
    std::FILE* summary = cfg.output_path.empty() ? stderr : stdout;
    fmt::print(summary,
               "sf={} T={} s T_w={} s N={}\n  p_snr={:.6f} p_sir={:.6f} p_s={:.6f} (ci +/-{:.6f})\n"
               "  epp={} consumption={:.6f} J harvest={:.6f} J lifetime={}\n",
               r.scenario.sf, r.scenario.report_period_s, r.scenario.wet_duration_s,
               r.scenario.n_devices, r.sim.p_snr, r.sim.p_sir, r.sim.p_s, r.sim.ci_halfwidth,
               r.lifetime.epp_j ? fmt::format("{:.6f} J", *r.lifetime.epp_j) : "UNBOUNDED",
               r.lifetime.consumption_per_period_j, r.lifetime.harvest_per_period_j,
               years(r.lifetime));
    return emit(table, cfg);
  }
  if (command == "optimize") {
    OptimizationResult opt;
    const auto table = run_optimize(cfg, &opt);
    fmt::print(stderr, "optimum: sf={} t_w={:.3f} s lifetime={} p_s={:.6f}\n", opt.sf,
               opt.t_w_opt_s, years(opt.lifetime), opt.p_s_at_opt);
    return emit(table, cfg);
  }
  if (command == "calibrate") {
    const auto profile = run_calibrate(cfg);
    fmt::print(stderr, "calibrated overhead: {} J per period (anchor {} y)\n",
               profile.overhead_energy_j, cfg.anchor_lifetime_years);
    if (cfg.output_path.empty())
      std::cout << profile_to_text(profile);
    else
      save_profile(profile, cfg.output_path);
    return ok;
  }
  return config_error;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underground LoRaWAN with wireless energy transfer: simulator and optimizer"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config, "key = value config, or a CSV written by this tool")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "master seed (geometry = seed, traffic = seed + 1)");
  app.add_option("--trials", flags.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
  app.add_option("--out", flags.out, "output path (stdout when omitted)");
  app.add_option("--energy-profile", flags.energy_profile,
                 "'default', a name under profiles/, or a path");
  app.add_option("--toa-source", flags.toa_source, "time-on-air source")
      ->check(CLI::IsMember({"computed", "paper_table"}));
  app.add_option("--interference", flags.interference, "SIR interference model")
      ->check(CLI::IsMember({"aggregate", "strongest"}));

  app.add_subcommand("run", "simulate one scenario; CSV row plus summary");
  app.add_subcommand("fig3", "success probability and EPP per depth, moisture and SF");
  app.add_subcommand("fig4", "lifetime versus wet duration per SF");
  app.add_subcommand("fig5", "optimized lifetime versus N, period and harvested power");
  app.add_subcommand("optimize", "joint SF and wet-duration optimization");
  app.add_subcommand("calibrate", "fit the per-period overhead to the anchor lifetime");
  app.add_subcommand("toa-table", "time-on-air per SF");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = build_config(flags);
    return dispatch(command, cfg);
  } catch (const saguin::CalibrationInfeasible& e) {
    fmt::print(stderr, "calibration infeasible: {} (reachable lifetime {} .. {} y)\n", e.what(),
               e.lower_bound_years, e.upper_bound_years);
    return calibration_infeasible;
  } catch (const saguin::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return config_error;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "invalid scenario: {}\n", e.what());
    return config_error;
  } catch (const std::domain_error& e) {
    fmt::print(stderr, "invalid scenario: {}\n", e.what());
    return config_error;
  } catch (const std::out_of_range& e) {
    fmt::print(stderr, "invalid scenario: {}\n", e.what());
    return config_error;
  }
}
