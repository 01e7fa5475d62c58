#ifndef SAGUIN_NETWORK_SIM_HPP
#define SAGUIN_NETWORK_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "saguin/error.hpp"
#include "saguin/link_budget.hpp"
#include "saguin/lora_phy.hpp"
#include "saguin/parallel.hpp"
#include "saguin/random.hpp"
#include "saguin/soil_dielectric.hpp"

namespace saguin {

enum class Placement { disk_uniform, pipeline_line };
enum class InterferenceMode { aggregate, strongest };

constexpr std::string_view to_string(Placement p) {
  return p == Placement::disk_uniform ? "disk_uniform" : "pipeline_line";
}
constexpr std::string_view to_string(InterferenceMode m) {
  return m == InterferenceMode::aggregate ? "aggregate" : "strongest";
}
inline std::optional<Placement> parse_placement(std::string_view s) {
  if (s == "disk_uniform") return Placement::disk_uniform;
  if (s == "pipeline_line") return Placement::pipeline_line;
  return std::nullopt;
}
inline std::optional<InterferenceMode> parse_interference(std::string_view s) {
  if (s == "aggregate") return InterferenceMode::aggregate;
  if (s == "strongest") return InterferenceMode::strongest;
  return std::nullopt;
}

/// Minimum elevation emitted when strict_table2 is set.
inline constexpr double min_elevation_deg = 30.0;

struct Scenario {
  int n_devices = 10000;
  double report_period_s = 1800.0;
  double wet_duration_s = 1200.0;
  int sf = 9;
  int n_channels = 64;
  Placement placement = Placement::disk_uniform;
  SoilProfile soil{};
  double burial_depth_m = 0.6;
  double hap_altitude_m = 20e3;
  RadioConfig radio{};
  LoRaParams framing{};  // sf field ignored; Scenario::sf wins
  ToaSource toa_source = ToaSource::computed;
  DemodThresholds thresholds{};
  InterferenceMode interference = InterferenceMode::aggregate;
  bool strict_table2 = true;
  bool freeze_geometry = false;
  std::uint64_t geometry_seed = 1;
  std::uint64_t traffic_seed = 2;
  int trials = 100;

  double tx_window_s() const { return report_period_s - wet_duration_s; }

  LoRaParams lora() const {
    auto p = framing;
    p.sf = sf;
    return p;
  }

  double toa_s() const { return time_on_air(lora(), toa_source); }

  /// Largest ground distance a device may be placed at.
  double placement_radius_m() const {
    double r = radio.coverage_radius_m;
    if (strict_table2) {
      const double r_elev = hap_altitude_m / std::tan(min_elevation_deg * std::numbers::pi / 180.0);
      r = std::min(r, r_elev);
    }
    return r;
  }
};

/// Wet duration may be 0 (battery-only baseline); the window must hold one frame.
inline void validate(const Scenario& s) {
  if (s.n_devices < 1) throw ScenarioInvalid("n_devices must be >= 1");
  if (s.n_channels < 1) throw ScenarioInvalid("n_channels must be >= 1");
  if (s.trials < 1) throw ScenarioInvalid("trials must be >= 1");
  if (!(s.report_period_s > 0.0)) throw ScenarioInvalid("report period must be positive");
  if (!(s.wet_duration_s >= 0.0 && s.wet_duration_s < s.report_period_s))
    throw ScenarioInvalid("wet duration must lie in [0, report period)");
  if (!(s.burial_depth_m > 0.0)) throw ScenarioInvalid("burial depth must be positive");
  if (!(s.hap_altitude_m > 0.0)) throw ScenarioInvalid("HAP altitude must be positive");
  try {
    validate(s.soil);
    validate(s.radio);
    validate(s.lora());
  } catch (const std::exception& e) {
    throw ScenarioInvalid(e.what());
  }
  // relative slack absorbs the rounding of T - (T - ToA)
  if (s.tx_window_s() < s.toa_s() * (1.0 - 1e-12))
    throw ScenarioInvalid("transmission window shorter than one time-on-air");
}

/// Span of admissible start times, T_t - ToA, clamped at zero.
inline double start_window_s(const Scenario& s) {
  return std::max(0.0, s.tx_window_s() - s.toa_s());
}

struct PacketAttempt {
  std::uint32_t device_id = 0;
  int sf = 9;
  double start_s = 0.0;
  double duration_s = 0.0;
  std::uint32_t channel = 0;
  double rx_power_mw = 0.0;
  double snr_db = 0.0;
  bool snr_ok = false;
};

struct SimResult {
  double p_snr = 0.0;
  double p_sir = 0.0;  // conditional on snr_ok
  double p_s = 0.0;    // joint snr_ok && sir_ok
  double p_s_product = 0.0;  // p_snr * p_sir, diagnostic
  double p_sir_unconditional = 0.0;
  double ci_halfwidth = 0.0;  // 95 % normal half-width on p_s across trials
  double mean_rx_power_dbm = 0.0;
  int trials_run = 0;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

// --- placement -------------------------------------------------------------

inline double placement_radius_draw(const Scenario& s, std::uint64_t trial, std::uint32_t device) {
  const double u = rng::to_unit(rng::draw(s.geometry_seed, rng::Stream::placement,
                                          s.freeze_geometry ? 0 : trial, device));
  const double r_max = s.placement_radius_m();
  switch (s.placement) {
    case Placement::disk_uniform:
      return r_max * std::sqrt(u);
    case Placement::pipeline_line:
      return std::abs(r_max * (2.0 * u - 1.0));
  }
  return 0.0;
}

/// Device geometries for one trial: area-uniform on the coverage disk, or
/// uniform along a 2R pipeline segment through the nadir.
inline std::vector<LinkGeometry> place_devices(const Scenario& s, std::uint64_t trial) {
  std::vector<LinkGeometry> out;
  out.reserve(static_cast<std::size_t>(s.n_devices));
  for (int d = 0; d < s.n_devices; ++d)
    out.push_back(make_geometry(s.burial_depth_m, s.hap_altitude_m,
                                placement_radius_draw(s, trial, static_cast<std::uint32_t>(d))));
  return out;
}

// --- traffic ---------------------------------------------------------------

inline double start_fraction_draw(const Scenario& s, std::uint64_t trial, std::uint32_t device) {
  return rng::to_unit(rng::draw(s.traffic_seed, rng::Stream::start_time, trial, device));
}

inline std::uint32_t channel_draw(const Scenario& s, std::uint64_t trial, std::uint32_t device) {
  return rng::to_index(rng::draw(s.traffic_seed, rng::Stream::channel, trial, device),
                       static_cast<std::uint32_t>(s.n_channels));
}

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// One uplink per device, start uniform on [0, T_t - ToA], channel uniform.
inline std::vector<PacketAttempt> generate_traffic(const Scenario& s,
                                                   std::span<const LinkGeometry> geometries,
                                                   std::uint64_t trial,
                                                   const SoilLink& link) {
  validate(s);
  const double toa = s.toa_s();
  const double window = start_window_s(s);
  std::vector<PacketAttempt> out;
  out.reserve(geometries.size());
  for (std::size_t d = 0; d < geometries.size(); ++d) {
    const auto id = static_cast<std::uint32_t>(d);
    const auto rx = link.at(geometries[d].slant_distance_m);
    PacketAttempt a;
    a.device_id = id;
    a.sf = s.sf;
    a.start_s = start_fraction_draw(s, trial, id) * window;
    a.duration_s = toa;
    a.channel = channel_draw(s, trial, id);
    a.rx_power_mw = dbm_to_mw(rx.p_rx_dbm);
    a.snr_db = rx.snr_db;
    a.snr_ok = demod_ok(rx.snr_db, s.sf, s.thresholds);
    out.push_back(a);
  }
  return out;
}

inline std::vector<PacketAttempt> generate_traffic(const Scenario& s,
                                                   std::span<const LinkGeometry> geometries,
                                                   std::uint64_t trial) {
  const SoilLink link(s.radio, s.soil, s.burial_depth_m);
  return generate_traffic(s, geometries, trial, link);
}

// --- collisions ------------------------------------------------------------

/// Open-interval overlap; touching endpoints do not collide.
inline bool overlaps(double start_a, double dur_a, double start_b, double dur_b) {
  return start_a < start_b + dur_b && start_b < start_a + dur_a;
}

inline bool capture_ok(double signal_mw, double interference_mw, double gamma_db) {
  if (interference_mw <= 0.0) return true;
  return 10.0 * std::log10(signal_mw / interference_mw) >= gamma_db;
}

/// Capture-effect outcome per attempt. Interference from overlapping
/// same-channel attempts is accumulated in ascending device-index order.
inline std::vector<bool> resolve_collisions(std::span<const PacketAttempt> attempts,
                                            const DemodThresholds& thresholds,
                                            InterferenceMode mode) {
  const std::size_t n = attempts.size();
  std::vector<bool> sir_ok(n, true);
  if (n == 0) return sir_ok;
  for (const auto& a : attempts)
    if (a.sf != attempts.front().sf)
      throw ContractViolation("resolve_collisions: attempts with mixed spreading factors");

  double max_duration = 0.0;
  for (const auto& a : attempts) max_duration = std::max(max_duration, a.duration_s);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = attempts[x];
    const auto& b = attempts[y];
    if (a.channel != b.channel) return a.channel < b.channel;
    if (a.start_s != b.start_s) return a.start_s < b.start_s;
    return x < y;
  });

  std::vector<std::size_t> hits;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t k = order[pos];
    const auto& a = attempts[k];
    hits.clear();
    for (std::size_t q = pos; q-- > 0;) {
      const auto& b = attempts[order[q]];
      if (b.channel != a.channel || !(b.start_s + max_duration > a.start_s)) break;
      if (overlaps(a.start_s, a.duration_s, b.start_s, b.duration_s)) hits.push_back(order[q]);
    }
    for (std::size_t q = pos + 1; q < n; ++q) {
      const auto& b = attempts[order[q]];
      if (b.channel != a.channel || !(b.start_s < a.start_s + a.duration_s)) break;
      if (overlaps(a.start_s, a.duration_s, b.start_s, b.duration_s)) hits.push_back(order[q]);
    }
    if (hits.empty()) continue;
    std::sort(hits.begin(), hits.end());
    double interference = 0.0;
    for (const std::size_t j : hits) {
      if (mode == InterferenceMode::aggregate)
        interference += attempts[j].rx_power_mw;
      else
        interference = std::max(interference, attempts[j].rx_power_mw);
    }
    sir_ok[k] = capture_ok(a.rx_power_mw, interference, thresholds.sir_capture_db);
  }
  return sir_ok;
}

// --- Monte Carlo -----------------------------------------------------------

struct TrialTally {
  std::uint32_t attempts = 0;
  std::uint32_t snr_ok = 0;
  std::uint32_t sir_ok = 0;
  std::uint32_t joint_ok = 0;
  double rx_dbm_sum = 0.0;
};

inline SimResult summarize(std::span<const TrialTally> tallies) {
  SimResult r;
  r.trials_run = static_cast<int>(tallies.size());
  if (tallies.empty()) return r;
  double sum_snr = 0.0, sum_s = 0.0, sum_s2 = 0.0, sum_sir = 0.0, sum_sir_u = 0.0, rx = 0.0;
  std::size_t sir_trials = 0, total_attempts = 0;
  for (const auto& t : tallies) {
    const double n = t.attempts;
    const double ps = t.joint_ok / n;
    sum_snr += t.snr_ok / n;
    sum_s += ps;
    sum_s2 += ps * ps;
    sum_sir_u += t.sir_ok / n;
    if (t.snr_ok > 0) {
      sum_sir += static_cast<double>(t.joint_ok) / t.snr_ok;
      ++sir_trials;
    }
    rx += t.rx_dbm_sum;
    total_attempts += t.attempts;
  }
  const double m = static_cast<double>(tallies.size());
  r.p_snr = sum_snr / m;
  r.p_s = sum_s / m;
  r.p_sir_unconditional = sum_sir_u / m;
  // With no decodable attempt anywhere the conditional is undefined; fall
  // back to the interference-only rate.
  r.p_sir = sir_trials > 0 ? sum_sir / static_cast<double>(sir_trials) : r.p_sir_unconditional;
  r.p_s_product = r.p_snr * r.p_sir;
  if (tallies.size() > 1) {
    const double var = std::max(0.0, (sum_s2 - sum_s * sum_s / m) / (m - 1.0));
    r.ci_halfwidth = 1.96 * std::sqrt(var / m);
  }
  r.mean_rx_power_dbm = rx / static_cast<double>(total_attempts);
  return r;
}

inline TrialTally tally_trial(std::span<const PacketAttempt> attempts,
                              const std::vector<bool>& sir_ok) {
  TrialTally t;
  t.attempts = static_cast<std::uint32_t>(attempts.size());
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    const bool s = attempts[i].snr_ok;
    t.snr_ok += s;
    t.sir_ok += sir_ok[i];
    t.joint_ok += s && sir_ok[i];
  }
  return t;
}

/// Full pipeline per trial: place, generate, resolve. Trials run in
/// parallel and are reduced in trial order.
inline SimResult simulate(const Scenario& s) {
  validate(s);
  const SoilLink link(s.radio, s.soil, s.burial_depth_m);
  std::vector<TrialTally> tallies(static_cast<std::size_t>(s.trials));
  parallel_for(tallies.size(), [&](std::size_t trial) {
    const auto geometries = place_devices(s, trial);
    const auto attempts = generate_traffic(s, geometries, trial, link);
    const auto sir_ok = resolve_collisions(attempts, s.thresholds, s.interference);
    auto t = tally_trial(attempts, sir_ok);
    for (const auto& g : geometries) t.rx_dbm_sum += link.at(g.slant_distance_m).p_rx_dbm;
    tallies[trial] = t;
  });
  return summarize(tallies);
}

/// Re-evaluates one scenario at many wet durations with common random
/// numbers. Geometry, powers, channels and start fractions are drawn once;
/// each call only rescales starts into the new window and re-resolves
/// collisions. evaluate(t) is bit-identical to simulate() of the scenario
/// with wet_duration_s = t.
class WetSweepEvaluator {
public:
  explicit WetSweepEvaluator(Scenario s) : s_(std::move(s)) {
    s_.wet_duration_s = 0.0;
    validate(s_);
    toa_ = s_.toa_s();
    const SoilLink link(s_.radio, s_.soil, s_.burial_depth_m);
    trials_.resize(static_cast<std::size_t>(s_.trials));
    parallel_for(trials_.size(), [&](std::size_t trial) { trials_[trial] = prepare(trial, link); });
  }

  const Scenario& scenario() const { return s_; }
  double toa_s() const { return toa_; }
  double max_wet_duration_s() const { return s_.report_period_s - toa_; }

  SimResult evaluate(double wet_duration_s) const {
    Scenario probe = s_;
    probe.wet_duration_s = wet_duration_s;
    validate(probe);
    const double window = start_window_s(probe);
    std::vector<TrialTally> tallies(trials_.size());
    parallel_for(trials_.size(),
                 [&](std::size_t t) { tallies[t] = evaluate_trial(trials_[t], window); });
    return summarize(tallies);
  }

private:
  struct Entry {
    double u;
    double power_mw;
    std::uint32_t device;
    std::uint32_t channel;
    bool snr_ok;
  };
  struct Trial {
    std::vector<Entry> entries;  // sorted by (channel, u, device)
    std::uint32_t snr_ok = 0;
    double rx_dbm_sum = 0.0;
  };

  Trial prepare(std::size_t trial, const SoilLink& link) const {
    Trial t;
    t.entries.reserve(static_cast<std::size_t>(s_.n_devices));
    for (int d = 0; d < s_.n_devices; ++d) {
      const auto id = static_cast<std::uint32_t>(d);
      const auto g = make_geometry(s_.burial_depth_m, s_.hap_altitude_m,
                                   placement_radius_draw(s_, trial, id));
      const auto rx = link.at(g.slant_distance_m);
      const bool ok = demod_ok(rx.snr_db, s_.sf, s_.thresholds);
      t.entries.push_back(Entry{start_fraction_draw(s_, trial, id), dbm_to_mw(rx.p_rx_dbm), id,
                                channel_draw(s_, trial, id), ok});
      t.snr_ok += ok;
      t.rx_dbm_sum += rx.p_rx_dbm;  // device order, as in simulate()
    }
    std::sort(t.entries.begin(), t.entries.end(), [](const Entry& a, const Entry& b) {
      if (a.channel != b.channel) return a.channel < b.channel;
      if (a.u != b.u) return a.u < b.u;
      return a.device < b.device;
    });
    return t;
  }

  TrialTally evaluate_trial(const Trial& t, double window) const {
    TrialTally out;
    out.attempts = static_cast<std::uint32_t>(t.entries.size());
    out.snr_ok = t.snr_ok;
    out.rx_dbm_sum = t.rx_dbm_sum;
    const auto& e = t.entries;
    const std::size_t n = e.size();
    thread_local std::vector<double> start;
    thread_local std::vector<double> prefix;
    thread_local std::vector<std::uint32_t> hits;
    start.resize(n);
    prefix.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) start[i] = e[i].u * window;

    const double gamma = s_.thresholds.sir_capture_db;
    const double gamma_lin = std::pow(10.0, gamma / 10.0);
    const bool aggregate = s_.interference == InterferenceMode::aggregate;
    constexpr double unit_roundoff = 0x1.0p-53;

    for (std::size_t lo = 0; lo < n;) {
      std::size_t hi = lo + 1;
      while (hi < n && e[hi].channel == e[lo].channel) ++hi;
      // prefix sums restart per channel so the rounding bound scales with
      // this channel's total only
      prefix[lo] = 0.0;
      for (std::size_t i = lo; i < hi; ++i) prefix[i + 1] = prefix[i] + e[i].power_mw;
      const double bound = (4.0 * static_cast<double>(hi - lo + 4) * unit_roundoff + 1e-9) * prefix[hi];
      // Starts are sorted within the channel and every frame lasts toa_, so
      // the overlapping set of k is the contiguous run [first, last) minus k.
      std::size_t first = lo;
      std::size_t last = lo;
      for (std::size_t k = lo; k < hi; ++k) {
        while (!(start[first] + toa_ > start[k])) ++first;
        if (last <= k) last = k + 1;
        while (last < hi && start[last] < start[k] + toa_) ++last;
        const std::size_t count = last - first - 1;

        bool ok = true;
        if (count == 1) {
          const std::size_t j = first == k ? k + 1 : first;
          ok = capture_ok(e[k].power_mw, e[j].power_mw, gamma);
        } else if (count > 1) {
          bool exact = !aggregate;
          if (aggregate) {
            // Prefix-sum estimate decides unless it lies within rounding
            // distance of the threshold.
            const double estimate = (prefix[last] - prefix[first]) - e[k].power_mw;
            const double threshold = e[k].power_mw / gamma_lin;
            if (estimate > threshold + bound)
              ok = false;
            else if (estimate < threshold - bound)
              ok = true;
            else
              exact = true;
          }
          if (exact) {
            hits.clear();
            for (std::size_t q = first; q < last; ++q)
              if (q != k) hits.push_back(static_cast<std::uint32_t>(q));
            double interference = 0.0;
            if (aggregate) {
              std::sort(hits.begin(), hits.end(), [&](std::uint32_t a, std::uint32_t b) {
                return e[a].device < e[b].device;
              });
              for (const auto j : hits) interference += e[j].power_mw;
            } else {
              for (const auto j : hits) interference = std::max(interference, e[j].power_mw);
            }
            ok = capture_ok(e[k].power_mw, interference, gamma);
          }
        }
        out.sir_ok += ok;
        out.joint_ok += ok && e[k].snr_ok;
      }
      lo = hi;
    }
    return out;
  }

  Scenario s_;
  double toa_ = 0.0;
  std::vector<Trial> trials_;
};

}  // namespace saguin

#endif  // SAGUIN_NETWORK_SIM_HPP
