#ifndef SAGUIN_LINK_BUDGET_HPP
#define SAGUIN_LINK_BUDGET_HPP

#include <cmath>
#include <numbers>

#include "saguin/constants.hpp"
#include "saguin/error.hpp"
#include "saguin/soil_dielectric.hpp"

namespace saguin {

struct LinkGeometry {
  double burial_depth_m = 0.6;
  double hap_altitude_m = 20e3;
  double ground_distance_m = 0.0;  // device to HAP nadir
  double slant_distance_m = 20e3;
  double elevation_deg = 90.0;
};

inline LinkGeometry make_geometry(double burial_depth_m, double hap_altitude_m,
                                  double ground_distance_m) {
  if (!(hap_altitude_m > 0.0)) throw DomainError("HAP altitude must be positive");
  if (!(ground_distance_m >= 0.0)) throw DomainError("ground distance must be >= 0");
  LinkGeometry g;
  g.burial_depth_m = burial_depth_m;
  g.hap_altitude_m = hap_altitude_m;
  g.ground_distance_m = ground_distance_m;
  g.slant_distance_m = std::hypot(hap_altitude_m, ground_distance_m);
  g.elevation_deg = std::atan2(hap_altitude_m, ground_distance_m) * 180.0 / std::numbers::pi;
  return g;
}

struct RadioConfig {
  double tx_power_dbm = 14.0;
  double tx_gain_dbi = 2.15;
  double rx_gain_dbi = 25.0;
  double noise_power_dbm = -117.0;
  double path_loss_exponent = 2.0;
  double coverage_radius_m = 35e3;
};

inline void validate(const RadioConfig& r) {
  if (!std::isfinite(r.tx_power_dbm) || !std::isfinite(r.tx_gain_dbi) ||
      !std::isfinite(r.rx_gain_dbi) || !std::isfinite(r.noise_power_dbm))
    throw DomainError("radio powers and gains must be finite");
  if (!(r.path_loss_exponent >= 1.0)) throw DomainError("path loss exponent must be >= 1");
  if (!(r.coverage_radius_m > 0.0)) throw DomainError("coverage radius must be positive");
}

/// Modified Friis underground term. 8.69 = 20/ln(10) converts Np to dB.
inline double underground_path_loss(double burial_depth_m, const PropagationConstants& pc) {
  if (!(burial_depth_m > 0.0)) throw DomainError("burial depth must be positive");
  return 6.4 + 20.0 * std::log10(burial_depth_m) + 20.0 * std::log10(pc.beta) +
         8.69 * pc.alpha * burial_depth_m;
}

/// Soil-to-air interface loss, normal-incidence Fresnel power transmission.
inline double refraction_loss(double eps_real) {
  if (!(eps_real >= 1.0)) throw DomainError("eps_real must be >= 1 for the soil-air interface");
  const double n = std::sqrt(eps_real);
  return -10.0 * std::log10(4.0 * n / ((n + 1.0) * (n + 1.0)));
}

/// Log-distance loss with d0 = 1 m; free-space path loss when exponent == 2.
inline double air_path_loss(double slant_distance_m, double frequency_hz, double exponent) {
  if (!(slant_distance_m >= 1.0)) throw DomainError("slant distance must be >= 1 m");
  if (!(frequency_hz > 0.0)) throw DomainError("frequency must be positive");
  constexpr double d0 = 1.0;
  return 20.0 * std::log10(4.0 * std::numbers::pi * d0 * frequency_hz / constants::speed_of_light) +
         10.0 * exponent * std::log10(slant_distance_m / d0);
}

struct LinkLosses {
  double underground_db = 0.0;
  double refraction_db = 0.0;
  double air_db = 0.0;
};

struct ReceivedSignal {
  double p_rx_dbm;
  double snr_db;
};

inline ReceivedSignal received_signal(const RadioConfig& radio, const LinkLosses& losses) {
  const double p_rx = radio.tx_power_dbm + radio.tx_gain_dbi + radio.rx_gain_dbi -
                      losses.underground_db - losses.refraction_db - losses.air_db;
  return {p_rx, p_rx - radio.noise_power_dbm};
}

inline ReceivedSignal received_snr(const RadioConfig& radio, const LinkGeometry& geometry,
                                   const SoilProfile& soil) {
  validate(radio);
  const auto eps = complex_permittivity(soil);
  const auto pc = propagation_constants(eps, soil.frequency_hz);
  const LinkLosses losses{underground_path_loss(geometry.burial_depth_m, pc),
                          refraction_loss(eps.eps_real),
                          air_path_loss(geometry.slant_distance_m, soil.frequency_hz,
                                        radio.path_loss_exponent)};
  return received_signal(radio, losses);
}

/// Soil terms evaluated once for a fixed soil and depth; only the air term
/// varies per device.
class SoilLink {
public:
  SoilLink(const RadioConfig& radio, const SoilProfile& soil, double burial_depth_m)
      : radio_(radio), frequency_hz_(soil.frequency_hz) {
    validate(radio);
    const auto eps = complex_permittivity(soil);
    const auto pc = propagation_constants(eps, soil.frequency_hz);
    soil_losses_.underground_db = underground_path_loss(burial_depth_m, pc);
    soil_losses_.refraction_db = refraction_loss(eps.eps_real);
  }

  ReceivedSignal at(double slant_distance_m) const {
    auto losses = soil_losses_;
    losses.air_db = air_path_loss(slant_distance_m, frequency_hz_, radio_.path_loss_exponent);
    return received_signal(radio_, losses);
  }

  const LinkLosses& soil_losses() const { return soil_losses_; }

private:
  RadioConfig radio_;
  double frequency_hz_;
  LinkLosses soil_losses_;
};

}  // namespace saguin

#endif  // SAGUIN_LINK_BUDGET_HPP
