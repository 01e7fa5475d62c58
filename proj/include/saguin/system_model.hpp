#ifndef SAGUIN_SYSTEM_MODEL_HPP
#define SAGUIN_SYSTEM_MODEL_HPP

#include <cmath>
#include <limits>
#include <string>

#include "saguin/energy_lifetime.hpp"
#include "saguin/error.hpp"
#include "saguin/network_sim.hpp"

namespace saguin {

struct EnergyModel {
  ClassAProfile profile = ClassAProfile::placeholder();
  HarvestConfig harvest{};
  Battery battery{};
};

/// Lifetime of a device delivering one report per period. The per-period
/// consumption is charged per delivered report (divided by P_S), so
/// collisions and SNR outages shorten lifetime; harvest is credited per
/// period. P_S == 0 gives zero lifetime and an unbounded EPP.
inline LifetimeResult evaluate_lifetime(const Scenario& s, const EnergyModel& energy,
                                        const SimResult& sim) {
  const double toa = s.toa_s();
  const double consumption = consumption_per_period(energy.profile, toa, s.report_period_s);
  const double harvest = harvested_per_period(energy.harvest, s.wet_duration_s);
  if (!(sim.p_s > 0.0)) {
    LifetimeResult r;
    r.consumption_per_period_j = std::numeric_limits<double>::infinity();
    r.harvest_per_period_j = harvest;
    r.net_drain_j = std::numeric_limits<double>::infinity();
    r.lifetime_years = 0.0;
    return r;
  }
  auto r = lifetime(energy.battery, consumption / sim.p_s, harvest, s.report_period_s);
  r.epp_j = epp(energy_per_attempt(energy.profile, toa), sim.p_s);
  return r;
}

/// Solves lifetime(overhead) == anchor by bisection on the per-period
/// overhead. lifetime_at(o) must be nonincreasing in o.
template <typename LifetimeAt>
double calibrate_overhead(double anchor_years, LifetimeAt&& lifetime_at, double tolerance_j = 1e-6) {
  if (!(anchor_years > 0.0)) throw DomainError("anchor lifetime must be positive");
  const double at_zero = lifetime_rank(lifetime_at(0.0));
  if (at_zero < anchor_years)
    throw CalibrationInfeasible("anchor lifetime exceeds the zero-overhead lifetime", 0.0, at_zero);
  if (at_zero == anchor_years) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (lifetime_rank(lifetime_at(hi)) > anchor_years) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12)
      throw CalibrationInfeasible("no overhead brings the lifetime down to the anchor",
                                  lifetime_rank(lifetime_at(hi)), at_zero);
  }
  while (hi - lo > tolerance_j) {
    const double mid = 0.5 * (lo + hi);
    if (lifetime_rank(lifetime_at(mid)) > anchor_years)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct CalibrationAnchor {
  double lifetime_years = 30.5;
  Scenario scenario{};  // defaults: SF9, T_w = 1200 s, N = 10^4, T = 1800 s, in-situ soil
};

/// Fits energy.profile.overhead_energy_j to the anchor with one Monte Carlo
/// run (P_S does not depend on the overhead).
inline double calibrate_overhead(const CalibrationAnchor& anchor, const EnergyModel& energy) {
  const SimResult sim = simulate(anchor.scenario);
  return calibrate_overhead(anchor.lifetime_years, [&](double overhead) {
    EnergyModel e = energy;
    e.profile.overhead_energy_j = overhead;
    return evaluate_lifetime(anchor.scenario, e, sim);
  });
}

}  // namespace saguin

#endif  // SAGUIN_SYSTEM_MODEL_HPP
