#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "saguin/constants.hpp"
#include "saguin/soil_dielectric.hpp"

using namespace saguin;

namespace {

// Frozen from tests/oracles/golden_values.py (mpmath, 40 digits).
struct Golden {
  double vwc, eps_real, eps_imag, alpha, beta;
};
constexpr Golden dry{0.0, 2.4043325725063588, 0.10146822945703127, 0.59509333381658535,
                     28.214527555172887};
constexpr Golden favorable{0.05, 3.6397671351649224, 0.26305252169981816, 1.2533476958298167,
                           34.729512571114341};
constexpr Golden in_situ{0.119, 6.1115487037019197, 0.60410909128398634, 2.2200366170988224,
                         45.028037523678794};
constexpr Golden wet{0.3, 16.805489747433257, 2.2022013025113062, 4.8758919854734359,
                     74.736150497712459};

SoilProfile soil(double vwc) {
  SoilProfile p;
  p.vwc = vwc;
  return p;
}

void expect_golden(const Golden& g) {
  const auto eps = complex_permittivity(soil(g.vwc));
  EXPECT_NEAR(eps.eps_real, g.eps_real, 1e-12 * g.eps_real);
  EXPECT_NEAR(eps.eps_imag, g.eps_imag, 1e-12 * g.eps_imag);
  const auto pc = propagation_constants(eps, 868e6);
  EXPECT_NEAR(pc.alpha, g.alpha, 1e-11 * g.alpha);
  EXPECT_NEAR(pc.beta, g.beta, 1e-11 * g.beta);
}

}  // namespace

TEST(SoilDielectric, DrySoilGolden) {
  expect_golden(dry);
  EXPECT_LT(complex_permittivity(soil(0.0)).eps_imag, 0.2);
}

TEST(SoilDielectric, FavorableGolden) { expect_golden(favorable); }
TEST(SoilDielectric, InSituGolden) { expect_golden(in_situ); }

TEST(SoilDielectric, WetterSoilHasLargerEpsReal) {
  expect_golden(wet);
  EXPECT_GT(complex_permittivity(soil(0.30)).eps_real, complex_permittivity(soil(0.119)).eps_real);
}

TEST(SoilDielectric, ValidityBandIsHard) {
  SoilProfile p;
  p.frequency_hz = 299e6;
  EXPECT_THROW(complex_permittivity(p), OutOfRangeError);
  p.frequency_hz = 3.01e9;
  EXPECT_THROW(complex_permittivity(p), OutOfRangeError);
  p.frequency_hz = 300e6;
  EXPECT_NO_THROW(complex_permittivity(p));
  p.frequency_hz = 3e9;
  EXPECT_NO_THROW(complex_permittivity(p));
}

TEST(SoilDielectric, DomainErrors) {
  EXPECT_THROW(complex_permittivity(soil(1.0)), DomainError);
  EXPECT_THROW(complex_permittivity(soil(-0.01)), DomainError);
  SoilProfile p;
  p.clay_fraction = 1.2;
  EXPECT_THROW(complex_permittivity(p), DomainError);
  EXPECT_THROW(propagation_constants({0.0, 0.0}, 868e6), DomainError);
  EXPECT_THROW(propagation_constants({-1.0, 0.0}, 868e6), DomainError);
}

TEST(SoilDielectric, ModelName) {
  EXPECT_EQ(to_string(DielectricModel::mbsdm), "mbsdm");
  EXPECT_EQ(MbsdmConstants::version, "mbsdm-2009.1");
}

TEST(PropagationConstants, VacuumLimit) {
  const auto pc = propagation_constants({1.0, 0.0}, 868e6);
  EXPECT_EQ(pc.alpha, 0.0);
  EXPECT_NEAR(pc.beta, 18.191934790540598, 1e-12);
  // the vacuum constants are CODATA values, not exactly 1/c^2
  EXPECT_NEAR(pc.beta, constants::two_pi * 868e6 / constants::speed_of_light, 1e-8);
}

TEST(PropagationConstants, LosslessDielectricScalesWithRootEps) {
  const auto one = propagation_constants({1.0, 0.0}, 868e6);
  const auto four = propagation_constants({4.0, 0.0}, 868e6);
  EXPECT_EQ(four.alpha, 0.0);
  EXPECT_NEAR(four.beta, 2.0 * one.beta, 1e-12);
}

// --- properties -------------------------------------------------------------

TEST(SoilDielectricProperty, EpsRealNondecreasingInVwc) {
  double prev = 0.0;
  for (int i = 0; i <= 7; ++i) {
    const double e = complex_permittivity(soil(0.05 * i)).eps_real;
    EXPECT_GE(e, prev) << "vwc=" << 0.05 * i;
    prev = e;
  }
}

TEST(SoilDielectricProperty, InvariantsOnGrid) {
  for (int i = 0; i <= 7; ++i) {
    const auto eps = complex_permittivity(soil(0.05 * i));
    EXPECT_GE(eps.eps_real, 1.0);
    EXPECT_GE(eps.eps_imag, 0.0);
    const auto pc = propagation_constants(eps, 868e6);
    EXPECT_GE(pc.alpha, 0.0);
    EXPECT_GT(pc.beta, 0.0);
  }
}

TEST(PropagationConstantsProperty, AlphaZeroIffLossless) {
  EXPECT_EQ(propagation_constants({5.0, 0.0}, 868e6).alpha, 0.0);
  EXPECT_GT(propagation_constants({5.0, 1e-6}, 868e6).alpha, 0.0);
}

TEST(PropagationConstantsProperty, IncreasingInFrequency) {
  const ComplexPermittivity eps{6.0, 0.6};
  double a = 0.0, b = 0.0;
  for (double f = 300e6; f <= 3e9; f += 100e6) {
    const auto pc = propagation_constants(eps, f);
    EXPECT_GT(pc.alpha, a);
    EXPECT_GT(pc.beta, b);
    a = pc.alpha;
    b = pc.beta;
  }
}

TEST(PropagationConstantsProperty, LowLossApproximation) {
  const ComplexPermittivity eps{6.0, 0.06};
  const double f = 868e6;
  const double omega = constants::two_pi * f;
  const double mu_eps = constants::vacuum_permeability * constants::vacuum_permittivity * eps.eps_real;
  const double approx = omega / 2.0 * std::sqrt(mu_eps) * (eps.eps_imag / eps.eps_real);
  EXPECT_NEAR(propagation_constants(eps, f).alpha, approx, 0.01 * approx);
}
