#ifndef SAGUIN_EXPERIMENT_CONFIG_HPP
#define SAGUIN_EXPERIMENT_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "saguin/energy_profile_io.hpp"
#include "saguin/error.hpp"
#include "saguin/key_value.hpp"
#include "saguin/network_sim.hpp"
#include "saguin/optimizer.hpp"
#include "saguin/system_model.hpp"

namespace saguin {

/// Sweep axes. An empty axis means "the base scenario's value" except for
/// sfs (all of 7..12) and t_ws (0, step, 2 step, ... up to T - ToA).
struct SweepAxes {
  std::vector<double> depths;
  std::vector<double> vwcs;
  std::vector<double> sfs;
  std::vector<double> t_ws;
  double t_w_step_s = 50.0;
  std::vector<double> n_devices;
  std::vector<double> report_periods;
  std::vector<double> received_powers;
};

struct ExperimentConfig {
  Scenario scenario{};
  std::string profile_name = "default";
  kv::Entries inline_profile;  // profile.* keys; override profile_name when present
  EnergyModel energy{};        // profile filled in by resolve_energy_profile
  SweepAxes sweep{};
  double anchor_lifetime_years = 30.5;
  SearchOptions search{};
  std::string output_path;  // not part of the resolved dump
};

namespace detail {

struct Binding {
  std::string key;
  std::function<void(std::string_view)> set;
  std::function<std::string()> get;
};

template <typename Enum>
Binding enum_binding(std::string key, Enum& field,
                     std::optional<Enum> (*parse)(std::string_view),
                     std::string_view (*name)(Enum)) {
  return {key,
          [key, &field, parse](std::string_view v) {
            const auto e = parse(v);
            if (!e) throw ConfigError(fmt::format("'{}': unknown value '{}'", key, v));
            field = *e;
          },
          [&field, name] { return std::string(name(field)); }};
}

inline Binding real(std::string key, double& field) {
  return {key, [key, &field](std::string_view v) { field = kv::to_double(key, v); },
          [&field] { return kv::format_number(field); }};
}

inline Binding integer(std::string key, int& field) {
  return {key,
          [key, &field](std::string_view v) {
            const auto x = kv::to_integer(key, v);
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
              throw ConfigError(fmt::format("'{}': {} out of range", key, v));
            field = static_cast<int>(x);
          },
          [&field] { return fmt::format("{}", field); }};
}

inline Binding seed(std::string key, std::uint64_t& field) {
  return {key, [key, &field](std::string_view v) { field = kv::to_u64(key, v); },
          [&field] { return fmt::format("{}", field); }};
}

inline Binding flag(std::string key, bool& field) {
  return {key, [key, &field](std::string_view v) { field = kv::to_bool(key, v); },
          [&field] { return std::string(field ? "true" : "false"); }};
}

inline Binding list(std::string key, std::vector<double>& field) {
  return {key, [key, &field](std::string_view v) { field = kv::to_double_list(key, v); },
          [&field] { return kv::format_list(field); }};
}

inline std::string_view ldro_name(const std::optional<bool>& v) {
  return !v ? "auto" : (*v ? "true" : "false");
}

inline std::vector<Binding> bindings(ExperimentConfig& c) {
  auto& s = c.scenario;
  std::vector<Binding> b = {
      integer("scenario.n_devices", s.n_devices),
      real("scenario.report_period_s", s.report_period_s),
      real("scenario.wet_duration_s", s.wet_duration_s),
      integer("scenario.sf", s.sf),
      integer("scenario.n_channels", s.n_channels),
      integer("scenario.trials", s.trials),
      enum_binding("scenario.placement", s.placement, &parse_placement, &to_string),
      real("scenario.burial_depth_m", s.burial_depth_m),
      real("scenario.hap_altitude_m", s.hap_altitude_m),
      flag("scenario.strict_table2", s.strict_table2),
      flag("scenario.freeze_geometry", s.freeze_geometry),
      seed("scenario.geometry_seed", s.geometry_seed),
      seed("scenario.traffic_seed", s.traffic_seed),
      real("soil.clay_fraction", s.soil.clay_fraction),
      real("soil.vwc", s.soil.vwc),
      real("soil.frequency_hz", s.soil.frequency_hz),
      real("radio.tx_power_dbm", s.radio.tx_power_dbm),
      real("radio.tx_gain_dbi", s.radio.tx_gain_dbi),
      real("radio.rx_gain_dbi", s.radio.rx_gain_dbi),
      real("radio.noise_power_dbm", s.radio.noise_power_dbm),
      real("radio.path_loss_exponent", s.radio.path_loss_exponent),
      real("radio.coverage_radius_m", s.radio.coverage_radius_m),
      real("lora.bandwidth_hz", s.framing.bandwidth_hz),
      integer("lora.cr_denom_extra", s.framing.cr_denom_extra),
      integer("lora.app_payload_bytes", s.framing.app_payload_bytes),
      integer("lora.mac_overhead_bytes", s.framing.mac_overhead_bytes),
      integer("lora.preamble_symbols", s.framing.preamble_symbols),
      flag("lora.explicit_header", s.framing.explicit_header),
      flag("lora.crc", s.framing.crc),
      {"lora.ldro",
       [&s](std::string_view v) {
         if (v == "auto")
           s.framing.ldro.reset();
         else
           s.framing.ldro = kv::to_bool("lora.ldro", v);
       },
       [&s] { return std::string(ldro_name(s.framing.ldro)); }},
      enum_binding("lora.toa_source", s.toa_source, &parse_toa_source, &to_string),
      {"phy.snr_thresholds_db",
       [&s](std::string_view v) {
         const auto values = kv::to_double_list("phy.snr_thresholds_db", v);
         if (values.size() != s.thresholds.snr_threshold_db.size())
           throw ConfigError("'phy.snr_thresholds_db' needs one value per SF 7..12");
         std::copy(values.begin(), values.end(), s.thresholds.snr_threshold_db.begin());
       },
       [&s] {
         return kv::format_list({s.thresholds.snr_threshold_db.begin(),
                                 s.thresholds.snr_threshold_db.end()});
       }},
      real("phy.sir_capture_db", s.thresholds.sir_capture_db),
      enum_binding("phy.interference", s.interference, &parse_interference, &to_string),
      {"energy.profile", [&c](std::string_view v) { c.profile_name = std::string(v); },
       [&c] { return c.profile_name; }},
      real("harvest.received_power_w", c.energy.harvest.received_power_w),
      real("harvest.conversion_efficiency", c.energy.harvest.conversion_efficiency),
      real("battery.capacity_mah", c.energy.battery.capacity_mah),
      real("battery.voltage_v", c.energy.battery.voltage_v),
      list("sweep.depths", c.sweep.depths),
      list("sweep.vwcs", c.sweep.vwcs),
      list("sweep.sfs", c.sweep.sfs),
      list("sweep.t_ws", c.sweep.t_ws),
      real("sweep.t_w_step_s", c.sweep.t_w_step_s),
      list("sweep.n_devices", c.sweep.n_devices),
      list("sweep.report_periods", c.sweep.report_periods),
      list("sweep.received_powers", c.sweep.received_powers),
      real("calibration.anchor_lifetime_years", c.anchor_lifetime_years),
      integer("optimizer.grid_points", c.search.grid_points),
      real("optimizer.tolerance_s", c.search.tolerance),
  };
  return b;
}

}  // namespace detail

/// Applies entries on top of `base`. Keys: the binding table above, plus
/// profile.* (inline energy profile), output.path and meta.* (ignored).
inline ExperimentConfig apply_entries(ExperimentConfig base, const kv::Entries& entries) {
  auto table = detail::bindings(base);
  bool profile_seen = false;
  for (const auto& [key, value] : entries) {
    if (key.rfind("meta.", 0) == 0) continue;
    if (key == "output.path") {
      base.output_path = value;
      continue;
    }
    if (key.rfind("profile.", 0) == 0) {
      if (!profile_seen) base.inline_profile.clear();
      profile_seen = true;
      base.inline_profile.emplace_back(key, value);
      continue;
    }
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& b) { return b.key == key; });
    if (it == table.end()) throw ConfigError(fmt::format("unknown config key '{}'", key));
    it->set(value);
  }
  return base;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  return apply_entries(ExperimentConfig{}, kv::parse(in, path.string()));
}

/// Fills cfg.energy.profile from the inline profile.* block or the named profile.
inline void resolve_energy_profile(ExperimentConfig& cfg, const std::filesystem::path& profile_dir) {
  if (!cfg.inline_profile.empty())
    cfg.energy.profile = profile_from_entries(cfg.inline_profile, "profile.");
  else
    cfg.energy.profile = resolve_profile(cfg.profile_name, profile_dir);
}

/// Full resolved configuration, in binding order, followed by the resolved
/// energy profile as profile.* keys. Feeding it back through apply_entries
/// reproduces the configuration.
inline kv::Entries resolved_entries(const ExperimentConfig& cfg) {
  ExperimentConfig copy = cfg;
  kv::Entries out;
  for (const auto& b : detail::bindings(copy)) out.emplace_back(b.key, b.get());
  std::istringstream profile(profile_to_text(cfg.energy.profile, "profile."));
  for (const auto& e : kv::parse(profile)) out.push_back(e);
  return out;
}

/// --seed: one master seed for both streams.
inline void apply_master_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.scenario.geometry_seed = seed;
  cfg.scenario.traffic_seed = seed + 1;
}

}  // namespace saguin

#endif  // SAGUIN_EXPERIMENT_CONFIG_HPP
