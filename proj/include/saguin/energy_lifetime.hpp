#ifndef SAGUIN_ENERGY_LIFETIME_HPP
#define SAGUIN_ENERGY_LIFETIME_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "saguin/constants.hpp"
#include "saguin/error.hpp"

namespace saguin {

struct DeviceState {
  std::string name;
  double duration_s = 0.0;
  double current_a = 0.0;

  friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

/// Class-A energy profile. The TX state is not stored: its duration is the
/// time-on-air of the configured frame.
struct ClassAProfile {
  std::string name = "default";
  double supply_voltage_v = 3.3;
  double tx_current_a = 0.114;
  std::vector<DeviceState> states;  // active states around one uplink, in order
  double sleep_current_a = 0.0;     // drawn for the rest of the period
  double overhead_energy_j = 0.0;   // per period, set by calibration

  friend bool operator==(const ClassAProfile&, const ClassAProfile&) = default;

  /// Non-normative placeholder table (SX1276-class radio, MCU sleeping
  /// between windows). Only the TX current and voltage are published values.
  static ClassAProfile placeholder() {
    ClassAProfile p;
    p.name = "default";
    p.states = {
        {"wake_up", 0.010, 5.0e-3},
        {"radio_prep", 0.005, 1.5e-3},
        {"rx1_wait", 0.980, 1.5e-3},
        {"rx1_listen", 0.033, 10.8e-3},
        {"rx2_wait", 0.960, 1.5e-3},
        {"rx2_listen", 0.164, 10.8e-3},
    };
    p.sleep_current_a = 1.5e-6;
    return p;
  }

  /// TX-only profile: every state zeroed, no sleep draw.
  static ClassAProfile tx_only() {
    ClassAProfile p;
    p.name = "tx_only";
    return p;
  }
};

inline void validate(const ClassAProfile& p) {
  if (!(p.supply_voltage_v > 0.0)) throw DomainError("supply voltage must be positive");
  if (!(p.tx_current_a >= 0.0) || !(p.sleep_current_a >= 0.0))
    throw DomainError("currents must be non-negative");
  if (!(p.overhead_energy_j >= 0.0)) throw DomainError("overhead energy must be non-negative");
  for (const auto& s : p.states) {
    if (!(s.duration_s >= 0.0)) throw DomainError("state '" + s.name + "' has negative duration");
    if (!(s.current_a >= 0.0)) throw DomainError("state '" + s.name + "' has negative current");
  }
}

struct HarvestConfig {
  double received_power_w = 0.02;
  double conversion_efficiency = 0.6;
};

struct Battery {
  double capacity_mah = 3000.0;
  double voltage_v = 3.3;

  double energy_j() const { return capacity_mah / 1000.0 * 3600.0 * voltage_v; }
};

/// Awake time around one uplink: TX plus every listed state.
inline double active_time(const ClassAProfile& profile, double toa_s) {
  double t = toa_s;
  for (const auto& s : profile.states) t += s.duration_s;
  return t;
}

/// Energy of one uplink attempt: TX burst plus active states, sleep excluded.
inline double energy_per_attempt(const ClassAProfile& profile, double toa_s) {
  validate(profile);
  if (!(toa_s > 0.0)) throw DomainError("time-on-air must be positive");
  const double v = profile.supply_voltage_v;
  double e = v * profile.tx_current_a * toa_s;
  for (const auto& s : profile.states) e += v * s.current_a * s.duration_s;
  return e;
}

/// One unconfirmed uplink per period, sleep for the remainder.
inline double consumption_per_period(const ClassAProfile& profile, double toa_s,
                                     double report_period_s) {
  const double active = active_time(profile, toa_s);
  if (active > report_period_s)
    throw ContractViolation("active time exceeds the reporting period");
  return energy_per_attempt(profile, toa_s) +
         profile.supply_voltage_v * profile.sleep_current_a * (report_period_s - active) +
         profile.overhead_energy_j;
}

/// Expected energy per delivered packet; nullopt when nothing is delivered.
inline std::optional<double> epp(double energy_per_attempt_j, double p_s) {
  if (!(p_s > 0.0)) return std::nullopt;
  if (p_s > 1.0) throw DomainError("success probability must be <= 1");
  return energy_per_attempt_j / p_s;
}

inline double harvested_per_period(const HarvestConfig& cfg, double wet_duration_s) {
  if (!(cfg.received_power_w >= 0.0)) throw DomainError("harvested power must be >= 0");
  if (!(cfg.conversion_efficiency >= 0.0 && cfg.conversion_efficiency <= 1.0))
    throw DomainError("conversion efficiency must lie in [0, 1]");
  if (!(wet_duration_s >= 0.0)) throw DomainError("wet duration must be >= 0");
  return cfg.received_power_w * cfg.conversion_efficiency * wet_duration_s;
}

struct LifetimeResult {
  double consumption_per_period_j = 0.0;
  double harvest_per_period_j = 0.0;
  double net_drain_j = 0.0;
  std::optional<double> lifetime_years;  // nullopt == ENERGY_NEUTRAL
  std::optional<double> epp_j;           // nullopt == unbounded

  bool energy_neutral() const { return !lifetime_years.has_value(); }
};

inline LifetimeResult lifetime(const Battery& battery, double consumption_j, double harvest_j,
                               double report_period_s) {
  if (!(consumption_j > 0.0)) throw DomainError("consumption per period must be positive");
  LifetimeResult r;
  r.consumption_per_period_j = consumption_j;
  r.harvest_per_period_j = harvest_j;
  r.net_drain_j = consumption_j - harvest_j;
  if (r.net_drain_j > 0.0) {
    const double periods = battery.energy_j() / r.net_drain_j;
    r.lifetime_years = periods * report_period_s / constants::seconds_per_year;
  }
  return r;
}

/// Orders lifetimes with ENERGY_NEUTRAL above every finite value.
inline double lifetime_rank(const LifetimeResult& r) {
  return r.lifetime_years.value_or(std::numeric_limits<double>::infinity());
}

}  // namespace saguin

#endif  // SAGUIN_ENERGY_LIFETIME_HPP
