#ifndef SAGUIN_OPTIMIZER_HPP
#define SAGUIN_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "saguin/energy_lifetime.hpp"
#include "saguin/error.hpp"
#include "saguin/network_sim.hpp"
#include "saguin/system_model.hpp"

namespace saguin {

struct SearchOptions {
  int grid_points = 64;
  double tolerance = 1.0;  // absolute, in the search variable's units
};

struct ScalarOptimum {
  double x = 0.0;
  double score = -std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool unimodal = true;       // coarse grid had a single rise-then-fall shape
  bool used_fallback = false; // exhaustive fine grid replaced golden-section
  std::vector<double> grid_x;
  std::vector<double> grid_score;
};

/// True when the sequence never rises again after it has started to fall.
/// Equal neighbours (including plateaus of +/-inf) count as flat.
inline bool is_unimodal(const std::vector<double>& values) {
  bool falling = false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) {
      if (falling) return false;
    } else if (values[i] < values[i - 1]) {
      falling = true;
    }
  }
  return true;
}

namespace detail {

class BestTracker {
public:
  void offer(double x, double score) {
    if (score > best_score_ || (score == best_score_ && x < best_x_)) {
      best_score_ = score;
      best_x_ = x;
    }
  }
  double x() const { return best_x_; }
  double score() const { return best_score_; }

private:
  double best_x_ = std::numeric_limits<double>::infinity();
  double best_score_ = -std::numeric_limits<double>::infinity();
};

}  // namespace detail

/// Bounded maximization of a noisy scalar objective: coarse equispaced grid,
/// then golden-section inside the cell pair around the best grid point.
/// Falls back to an exhaustive grid at `tolerance` spacing when the coarse
/// grid is not unimodal. Ties prefer the smaller x. The returned point is
/// never worse than any evaluated point.
inline ScalarOptimum maximize_bounded(const std::function<double(double)>& score, double lo,
                                      double hi, const SearchOptions& opt = {}) {
  if (!(hi >= lo)) throw DomainError("search interval is empty");
  if (opt.grid_points < 3) throw DomainError("grid needs at least 3 points");

  ScalarOptimum out;
  detail::BestTracker best;
  auto eval = [&](double x) {
    const double s = score(x);
    ++out.evaluations;
    best.offer(x, s);
    return s;
  };

  const int g = opt.grid_points;
  const double step = (hi - lo) / (g - 1);
  for (int i = 0; i < g; ++i) {
    const double x = i == g - 1 ? hi : lo + step * i;
    out.grid_x.push_back(x);
    out.grid_score.push_back(eval(x));
  }
  out.unimodal = is_unimodal(out.grid_score);

  if (!out.unimodal) {
    out.used_fallback = true;
    const auto n = static_cast<long>(std::floor((hi - lo) / opt.tolerance));
    for (long i = 0; i <= n; ++i) eval(lo + opt.tolerance * static_cast<double>(i));
    eval(hi);
  } else {
    const auto k = static_cast<int>(
        std::max_element(out.grid_score.begin(), out.grid_score.end()) - out.grid_score.begin());
    double a = out.grid_x[static_cast<std::size_t>(std::max(k - 1, 0))];
    double b = out.grid_x[static_cast<std::size_t>(std::min(k + 1, g - 1))];
    constexpr double inv_phi = std::numbers::phi - 1.0;  // 0.618...
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > opt.tolerance) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = eval(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = eval(d);
      }
    }
  }
  out.x = best.x();
  out.score = best.score();
  return out;
}

// --- wet-duration optimization --------------------------------------------

struct TwOptimum {
  int sf = 9;
  double t_w_opt_s = 0.0;
  LifetimeResult lifetime;
  SimResult sim;
  int evaluations = 0;
  bool unimodal = true;
  bool used_fallback = false;
  std::vector<double> grid_t_w;
  std::vector<LifetimeResult> grid_lifetime;
};

/// Score maximized by the wet-duration search: minus the net drain per
/// period. On the positive-drain branch this orders points exactly like
/// lifetime; inside the ENERGY_NEUTRAL region it prefers the largest surplus.
inline double lifetime_score(const LifetimeResult& r) { return -r.net_drain_j; }

/// Lifetime-maximizing wet duration over [0, T - ToA(sf)] with common random
/// numbers across all evaluated durations.
inline TwOptimum optimize_tw(const Scenario& scenario, int sf, const EnergyModel& energy,
                             const SearchOptions& opt = {}) {
  Scenario s = scenario;
  s.sf = sf;
  s.wet_duration_s = 0.0;
  if (!(s.report_period_s - s.toa_s() > 0.0))
    throw ScenarioInvalid("reporting period leaves no room for one time-on-air");
  const WetSweepEvaluator evaluator(s);

  auto lifetime_at = [&](double t_w) {
    Scenario probe = s;
    probe.wet_duration_s = t_w;
    const SimResult sim = evaluator.evaluate(t_w);
    return std::pair{sim, evaluate_lifetime(probe, energy, sim)};
  };

  std::vector<LifetimeResult> evaluated;  // grid points come first
  const auto found = maximize_bounded(
      [&](double t_w) {
        evaluated.push_back(lifetime_at(t_w).second);
        return lifetime_score(evaluated.back());
      },
      0.0, evaluator.max_wet_duration_s(), opt);

  TwOptimum out;
  out.sf = sf;
  out.t_w_opt_s = found.x;
  std::tie(out.sim, out.lifetime) = lifetime_at(found.x);
  out.evaluations = found.evaluations;
  out.unimodal = found.unimodal;
  out.used_fallback = found.used_fallback;
  out.grid_t_w = found.grid_x;
  out.grid_lifetime.assign(evaluated.begin(),
                           evaluated.begin() + static_cast<long>(found.grid_x.size()));
  return out;
}

struct OptimizationResult {
  int sf = 9;
  double t_w_opt_s = 0.0;
  LifetimeResult lifetime;
  double p_s_at_opt = 0.0;
  int evaluations = 0;
  std::vector<TwOptimum> per_sf_table;
};

/// Joint (SF, T_w) search: optimize_tw for every SF, keep the best score.
/// Ties go to the lower SF.
inline OptimizationResult optimize_sf_tw(const Scenario& scenario, const EnergyModel& energy,
                                         const SearchOptions& opt = {}) {
  OptimizationResult out;
  double best = -std::numeric_limits<double>::infinity();
  bool have = false;
  for (int sf = min_sf; sf <= max_sf; ++sf) {
    Scenario s = scenario;
    s.sf = sf;
    s.wet_duration_s = 0.0;
    if (!(s.report_period_s - s.toa_s() > 0.0)) continue;
    auto r = optimize_tw(scenario, sf, energy, opt);
    out.evaluations += r.evaluations;
    const double score = lifetime_score(r.lifetime);
    if (!have || score > best) {
      have = true;
      best = score;
      out.sf = sf;
      out.t_w_opt_s = r.t_w_opt_s;
      out.lifetime = r.lifetime;
      out.p_s_at_opt = r.sim.p_s;
    }
    out.per_sf_table.push_back(std::move(r));
  }
  if (!have) throw ScenarioInvalid("no spreading factor fits the reporting period");
  return out;
}

}  // namespace saguin

#endif  // SAGUIN_OPTIMIZER_HPP
