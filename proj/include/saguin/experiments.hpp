#ifndef SAGUIN_EXPERIMENTS_HPP
#define SAGUIN_EXPERIMENTS_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "saguin/csv.hpp"
#include "saguin/energy_lifetime.hpp"
#include "saguin/experiment_config.hpp"
#include "saguin/lora_phy.hpp"
#include "saguin/network_sim.hpp"
#include "saguin/optimizer.hpp"
#include "saguin/parallel.hpp"
#include "saguin/system_model.hpp"

namespace saguin {

inline constexpr std::string_view energy_neutral_sentinel = "ENERGY_NEUTRAL";
inline constexpr std::string_view unbounded_sentinel = "UNBOUNDED";

namespace detail {

inline std::string num(double v) { return kv::format_number(v); }

inline std::string years_or_sentinel(const LifetimeResult& r) {
  return r.lifetime_years ? num(*r.lifetime_years) : std::string(energy_neutral_sentinel);
}

inline std::string epp_or_sentinel(const std::optional<double>& e) {
  return e ? num(*e) : std::string(unbounded_sentinel);
}

inline int sf_value(double v) {
  if (v != std::floor(v)) throw ScenarioInvalid(fmt::format("spreading factor {} is not an integer", v));
  return static_cast<int>(v);
}

inline int count_value(double v, std::string_view what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
    throw ScenarioInvalid(fmt::format("{} {} is not a positive integer", what, v));
  return static_cast<int>(v);
}

inline std::vector<double> axis_or(const std::vector<double>& axis, double fallback) {
  return axis.empty() ? std::vector<double>{fallback} : axis;
}

inline std::vector<double> sf_axis(const SweepAxes& sweep) {
  return sweep.sfs.empty() ? std::vector<double>{7, 8, 9, 10, 11, 12} : sweep.sfs;
}

/// One sweep point's outcome: either rows or a rejection reason.
struct PointResult {
  std::vector<std::vector<std::string>> rows;
  std::string rejected;
};

/// Runs every point through the work pool and concatenates the results in
/// sweep order. Invalid points are rejected; everything else propagates.
template <typename Fn>
void run_points(std::size_t count, ResultTable& table, Fn&& point) {
  std::vector<PointResult> results(count);
  parallel_for(count, [&](std::size_t i) {
    try {
      results[i] = point(i);
    } catch (const std::invalid_argument& e) {
      results[i].rejected = e.what();
    } catch (const std::domain_error& e) {
      results[i].rejected = e.what();
    } catch (const std::out_of_range& e) {
      results[i].rejected = e.what();
    }
  });
  for (auto& r : results) {
    for (auto& row : r.rows) table.rows.push_back(std::move(row));
    if (!r.rejected.empty()) table.rejected.push_back(std::move(r.rejected));
  }
}

}  // namespace detail

/// P_S and EPP per (depth, vwc, SF) at the configured fixed T_w.
inline ResultTable run_fig3(const ExperimentConfig& cfg) {
  ResultTable t;
  t.experiment = "fig3";
  t.columns = {"depth_m", "vwc", "sf", "p_snr", "p_sir", "p_s", "ci", "epp_j", "p_s_product"};
  const auto depths = detail::axis_or(cfg.sweep.depths, cfg.scenario.burial_depth_m);
  const auto vwcs = detail::axis_or(cfg.sweep.vwcs, cfg.scenario.soil.vwc);
  const auto sfs = detail::sf_axis(cfg.sweep);
  const std::size_t per_depth = vwcs.size() * sfs.size();
  detail::run_points(depths.size() * per_depth, t, [&](std::size_t i) {
    const double depth = depths[i / per_depth];
    const double vwc = vwcs[(i % per_depth) / sfs.size()];
    const double sf_raw = sfs[i % sfs.size()];
    detail::PointResult r;
    try {
      Scenario s = cfg.scenario;
      s.burial_depth_m = depth;
      s.soil.vwc = vwc;
      s.sf = detail::sf_value(sf_raw);
      const SimResult sim = simulate(s);
      const auto e = epp(energy_per_attempt(cfg.energy.profile, s.toa_s()), sim.p_s);
      r.rows.push_back({detail::num(depth), detail::num(vwc), fmt::format("{}", s.sf),
                        detail::num(sim.p_snr), detail::num(sim.p_sir), detail::num(sim.p_s),
                        detail::num(sim.ci_halfwidth), detail::epp_or_sentinel(e),
                        detail::num(sim.p_s_product)});
    } catch (const std::exception& e) {
      throw ScenarioInvalid(fmt::format("depth={} vwc={} sf={}: {}", depth, vwc, sf_raw, e.what()));
    }
    return r;
  });
  return t;
}

/// Lifetime versus wet duration for every SF (one shared random-number set
/// per SF), plus the optimizer's point per SF.
inline ResultTable run_fig4(const ExperimentConfig& cfg) {
  ResultTable t;
  t.experiment = "fig4";
  t.columns = {"sf", "t_w_s", "lifetime_years", "p_s", "harvest_j", "consumption_j", "point"};
  const auto sfs = detail::sf_axis(cfg.sweep);
  std::vector<std::vector<std::string>> sf_rejects(sfs.size());
  detail::run_points(sfs.size(), t, [&](std::size_t i) {
    detail::PointResult r;
    Scenario base = cfg.scenario;
    try {
      base.sf = detail::sf_value(sfs[i]);
      base.wet_duration_s = 0.0;
      validate(base);
    } catch (const std::exception& e) {
      throw ScenarioInvalid(fmt::format("sf={}: {}", sfs[i], e.what()));
    }
    const WetSweepEvaluator evaluator(base);
    std::vector<double> t_ws = cfg.sweep.t_ws;
    if (t_ws.empty()) {
      if (!(cfg.sweep.t_w_step_s > 0.0)) throw ScenarioInvalid("sweep.t_w_step_s must be positive");
      const double top = evaluator.max_wet_duration_s();
      for (long k = 0; cfg.sweep.t_w_step_s * static_cast<double>(k) < top; ++k)
        t_ws.push_back(cfg.sweep.t_w_step_s * static_cast<double>(k));
      t_ws.push_back(top);
    }
    auto row = [&](double t_w, const SimResult& sim, const LifetimeResult& life, const char* kind) {
      return std::vector<std::string>{fmt::format("{}", base.sf), detail::num(t_w),
                                      detail::years_or_sentinel(life), detail::num(sim.p_s),
                                      detail::num(life.harvest_per_period_j),
                                      detail::num(life.consumption_per_period_j), kind};
    };
    for (const double t_w : t_ws) {
      Scenario s = base;
      s.wet_duration_s = t_w;
      try {
        const SimResult sim = evaluator.evaluate(t_w);
        r.rows.push_back(row(t_w, sim, evaluate_lifetime(s, cfg.energy, sim), "grid"));
      } catch (const std::exception& e) {
        sf_rejects[i].push_back(fmt::format("sf={} t_w={}: {}", base.sf, t_w, e.what()));
      }
    }
    const auto opt = optimize_tw(base, base.sf, cfg.energy, cfg.search);
    r.rows.push_back(row(opt.t_w_opt_s, opt.sim, opt.lifetime, "optimum"));
    return r;
  });
  for (auto& list : sf_rejects)
    for (auto& msg : list) t.rejected.push_back(std::move(msg));
  return t;
}

/// Joint (SF, T_w) optimum per (N, T, P_r) point.
inline ResultTable run_fig5(const ExperimentConfig& cfg) {
  ResultTable t;
  t.experiment = "fig5";
  t.columns = {"n", "t_s", "p_r_w", "sf_opt", "t_w_opt", "lifetime_years", "p_s"};
  const auto ns = detail::axis_or(cfg.sweep.n_devices, cfg.scenario.n_devices);
  const auto periods = detail::axis_or(cfg.sweep.report_periods, cfg.scenario.report_period_s);
  const auto powers = detail::axis_or(cfg.sweep.received_powers, cfg.energy.harvest.received_power_w);
  const std::size_t per_n = periods.size() * powers.size();
  detail::run_points(ns.size() * per_n, t, [&](std::size_t i) {
    const double n = ns[i / per_n];
    const double period = periods[(i % per_n) / powers.size()];
    const double p_r = powers[i % powers.size()];
    detail::PointResult r;
    try {
      Scenario s = cfg.scenario;
      s.n_devices = detail::count_value(n, "n_devices");
      s.report_period_s = period;
      s.wet_duration_s = 0.0;
      EnergyModel energy = cfg.energy;
      energy.harvest.received_power_w = p_r;
      const auto opt = optimize_sf_tw(s, energy, cfg.search);
      r.rows.push_back({fmt::format("{}", s.n_devices), detail::num(period), detail::num(p_r),
                        fmt::format("{}", opt.sf), detail::num(opt.t_w_opt_s),
                        detail::years_or_sentinel(opt.lifetime), detail::num(opt.p_s_at_opt)});
    } catch (const std::exception& e) {
      throw ScenarioInvalid(fmt::format("n={} t={} p_r={}: {}", n, period, p_r, e.what()));
    }
    return r;
  });
  return t;
}

struct SingleRun {
  Scenario scenario;
  SimResult sim;
  LifetimeResult lifetime;
};

inline SingleRun run_single_scenario(const ExperimentConfig& cfg) {
  SingleRun out{cfg.scenario, simulate(cfg.scenario), {}};
  out.lifetime = evaluate_lifetime(cfg.scenario, cfg.energy, out.sim);
  return out;
}

inline ResultTable run_single(const ExperimentConfig& cfg, SingleRun* summary = nullptr) {
  ResultTable t;
  t.experiment = "run";
  t.columns = {"n",     "t_s",       "t_w_s",        "sf",           "depth_m",
               "vwc",   "toa_s",     "p_snr",        "p_sir",        "p_s",
               "p_s_product",        "p_sir_unconditional",          "ci",
               "mean_rx_power_dbm",  "epp_j",        "consumption_j", "harvest_j",
               "net_drain_j",        "lifetime_years"};
  const SingleRun r = run_single_scenario(cfg);
  const auto& s = r.scenario;
  t.rows.push_back({fmt::format("{}", s.n_devices), detail::num(s.report_period_s),
                    detail::num(s.wet_duration_s), fmt::format("{}", s.sf),
                    detail::num(s.burial_depth_m), detail::num(s.soil.vwc), detail::num(s.toa_s()),
                    detail::num(r.sim.p_snr), detail::num(r.sim.p_sir), detail::num(r.sim.p_s),
                    detail::num(r.sim.p_s_product), detail::num(r.sim.p_sir_unconditional),
                    detail::num(r.sim.ci_halfwidth), detail::num(r.sim.mean_rx_power_dbm),
                    detail::epp_or_sentinel(r.lifetime.epp_j),
                    detail::num(r.lifetime.consumption_per_period_j),
                    detail::num(r.lifetime.harvest_per_period_j),
                    detail::num(r.lifetime.net_drain_j), detail::years_or_sentinel(r.lifetime)});
  if (summary) *summary = r;
  return t;
}

/// Per-SF wet-duration optimum; the selected SF is flagged.
inline ResultTable run_optimize(const ExperimentConfig& cfg, OptimizationResult* summary = nullptr) {
  ResultTable t;
  t.experiment = "optimize";
  t.columns = {"sf", "t_w_opt_s", "lifetime_years", "p_s", "net_drain_j", "evaluations",
               "unimodal", "used_fallback", "selected"};
  const auto opt = optimize_sf_tw(cfg.scenario, cfg.energy, cfg.search);
  for (const auto& r : opt.per_sf_table)
    t.rows.push_back({fmt::format("{}", r.sf), detail::num(r.t_w_opt_s),
                      detail::years_or_sentinel(r.lifetime), detail::num(r.sim.p_s),
                      detail::num(r.lifetime.net_drain_j), fmt::format("{}", r.evaluations),
                      r.unimodal ? "1" : "0", r.used_fallback ? "1" : "0",
                      r.sf == opt.sf ? "1" : "0"});
  if (summary) *summary = opt;
  return t;
}

/// Calibrated copy of the configured profile, fitted to the anchor
/// lifetime at the configured scenario.
inline ClassAProfile run_calibrate(const ExperimentConfig& cfg) {
  const CalibrationAnchor anchor{cfg.anchor_lifetime_years, cfg.scenario};
  ClassAProfile p = cfg.energy.profile;
  p.overhead_energy_j = calibrate_overhead(anchor, cfg.energy);
  p.name = "calibrated";
  return p;
}

inline ResultTable run_toa_table(const ExperimentConfig& cfg) {
  ResultTable t;
  t.experiment = "toa-table";
  t.columns = {"sf", "payload_symbols", "toa_s", "toa_computed_s", "toa_paper_table_s"};
  for (int sf = min_sf; sf <= max_sf; ++sf) {
    Scenario s = cfg.scenario;
    s.sf = sf;
    const auto p = s.lora();
    t.rows.push_back({fmt::format("{}", sf), fmt::format("{}", payload_symbols(p)),
                      detail::num(s.toa_s()), detail::num(time_on_air(p, ToaSource::computed)),
                      detail::num(time_on_air(p, ToaSource::paper_table))});
  }
  return t;
}

}  // namespace saguin

#endif  // SAGUIN_EXPERIMENTS_HPP
