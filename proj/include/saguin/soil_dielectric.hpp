#ifndef SAGUIN_SOIL_DIELECTRIC_HPP
#define SAGUIN_SOIL_DIELECTRIC_HPP

#include <cmath>
#include <string_view>

#include "saguin/constants.hpp"
#include "saguin/error.hpp"

namespace saguin {

struct SoilProfile {
  double clay_fraction = 0.1686;  // mass fraction of clay, [0, 1]
  double vwc = 0.119;             // volumetric water content, [0, 1)
  double frequency_hz = 868e6;
};

struct ComplexPermittivity {
  double eps_real = 1.0;  // relative permittivity
  double eps_imag = 0.0;  // loss factor
};

struct PropagationConstants {
  double alpha = 0.0;  // attenuation, Np/m
  double beta = 0.0;   // phase, rad/m
};

enum class DielectricModel { mbsdm };

constexpr std::string_view to_string(DielectricModel m) {
  switch (m) {
    case DielectricModel::mbsdm: return "mbsdm";
  }
  return "unknown";
}

/// Regression constants of the mineralogy-based spectroscopic dielectric
/// model for moist soils (Mironov, Kosolapova, Fomin, IEEE TGRS 47(7), 2009,
/// eqs. 17-26). C is the clay content in percent. Bulk density is not an
/// input: the regressions were fitted over the density range of the
/// training soils (~1.1-1.7 g/cm^3) and that default is implied.
struct MbsdmConstants {
  static constexpr std::string_view version = "mbsdm-2009.1";

  // dry soil refractive index  n_d = nd0 + nd1*C + nd2*C^2
  static constexpr double nd0 = 1.634;
  static constexpr double nd1 = -0.539e-2;
  static constexpr double nd2 = 0.2748e-4;
  // dry soil normalized attenuation  k_d = kd0 + kd1*C
  static constexpr double kd0 = 0.03952;
  static constexpr double kd1 = -0.04038e-2;
  // maximum bound water fraction  m_vt = mvt0 + mvt1*C
  static constexpr double mvt0 = 0.02863;
  static constexpr double mvt1 = 0.30673e-2;
  // bound water Debye parameters
  static constexpr double eps0b0 = 79.8;
  static constexpr double eps0b1 = -85.4e-2;
  static constexpr double eps0b2 = 32.7e-4;
  static constexpr double taub0 = 1.062e-11;        // s
  static constexpr double taub1 = 3.450e-12 * 1e-2; // s per % clay
  static constexpr double sigb0 = 0.3112;           // S/m
  static constexpr double sigb1 = 0.467e-2;
  // free (unbound) water Debye parameters
  static constexpr double eps0u = 100.0;
  static constexpr double tauu = 8.5e-12;  // s
  static constexpr double sigu0 = 0.3631;  // S/m
  static constexpr double sigu1 = 1.217e-2;
  // high-frequency limit shared by both water classes
  static constexpr double eps_inf = 4.9;

  static constexpr double min_frequency_hz = 300e6;
  static constexpr double max_frequency_hz = 3e9;
};

namespace detail {

struct RefractiveIndex {
  double n;      // refractive index
  double kappa;  // normalized attenuation coefficient
};

inline RefractiveIndex debye_water_index(double omega, double eps_static, double tau,
                                         double sigma) {
  const double x = omega * tau;
  const double denom = 1.0 + x * x;
  const double re = MbsdmConstants::eps_inf + (eps_static - MbsdmConstants::eps_inf) / denom;
  const double im = (eps_static - MbsdmConstants::eps_inf) * x / denom +
                    sigma / (omega * constants::vacuum_permittivity);
  const double mag = std::hypot(re, im);
  return {std::sqrt((mag + re) / 2.0), std::sqrt((mag - re) / 2.0)};
}

}  // namespace detail

inline void validate(const SoilProfile& p) {
  if (!(p.clay_fraction >= 0.0 && p.clay_fraction <= 1.0))
    throw DomainError("soil clay_fraction must lie in [0, 1]");
  if (!(p.vwc >= 0.0)) throw DomainError("soil vwc must be >= 0");
  if (!(p.vwc < 1.0)) throw DomainError("soil vwc must be < 1");
  if (!(p.frequency_hz > 0.0)) throw DomainError("frequency must be positive");
}

/// Complex relative permittivity of moist soil (refractive mixing of dry
/// matrix, bound water up to m_vt, free water above it).
inline ComplexPermittivity complex_permittivity(const SoilProfile& profile,
                                                DielectricModel model = DielectricModel::mbsdm) {
  validate(profile);
  if (profile.frequency_hz < MbsdmConstants::min_frequency_hz ||
      profile.frequency_hz > MbsdmConstants::max_frequency_hz)
    throw OutOfRangeError("frequency outside the 300 MHz - 3 GHz validity band of " +
                          std::string(to_string(model)));

  using K = MbsdmConstants;
  const double c = profile.clay_fraction * 100.0;
  const double nd = K::nd0 + K::nd1 * c + K::nd2 * c * c;
  const double kd = K::kd0 + K::kd1 * c;
  const double mvt = K::mvt0 + K::mvt1 * c;

  const double omega = constants::two_pi * profile.frequency_hz;
  const auto bound = detail::debye_water_index(omega, K::eps0b0 + K::eps0b1 * c + K::eps0b2 * c * c,
                                               K::taub0 + K::taub1 * c, K::sigb0 + K::sigb1 * c);
  const auto free = detail::debye_water_index(omega, K::eps0u, K::tauu, K::sigu0 + K::sigu1 * c);

  const double mv = profile.vwc;
  double n = 0.0;
  double kappa = 0.0;
  if (mv <= mvt) {
    n = nd + (bound.n - 1.0) * mv;
    kappa = kd + bound.kappa * mv;
  } else {
    n = nd + (bound.n - 1.0) * mvt + (free.n - 1.0) * (mv - mvt);
    kappa = kd + bound.kappa * mvt + free.kappa * (mv - mvt);
  }
  return {n * n - kappa * kappa, 2.0 * n * kappa};
}

inline PropagationConstants propagation_constants(const ComplexPermittivity& eps,
                                                  double frequency_hz) {
  if (!(eps.eps_real > 0.0)) throw DomainError("eps_real must be positive");
  if (!(eps.eps_imag >= 0.0)) throw DomainError("eps_imag must be non-negative");
  if (!(frequency_hz > 0.0)) throw DomainError("frequency must be positive");

  const double omega = constants::two_pi * frequency_hz;
  const double half_mu_eps =
      constants::vacuum_permeability * constants::vacuum_permittivity * eps.eps_real / 2.0;
  const double loss_tangent = eps.eps_imag / eps.eps_real;
  const double root = std::sqrt(1.0 + loss_tangent * loss_tangent);
  return {omega * std::sqrt(half_mu_eps * (root - 1.0)),
          omega * std::sqrt(half_mu_eps * (root + 1.0))};
}

}  // namespace saguin

#endif  // SAGUIN_SOIL_DIELECTRIC_HPP
