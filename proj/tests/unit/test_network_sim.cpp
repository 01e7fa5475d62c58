#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/collision_oracle.hpp"
#include "saguin/network_sim.hpp"

using namespace saguin;

namespace {

using oracle::attempt;
using oracle::random_instance;

Scenario small_scenario() {
  Scenario s;
  s.n_devices = 200;
  s.trials = 20;
  return s;
}

}  // namespace

// --- placement ----------------------------------------------------------------

TEST(Placement, NadirAndThirtyDegreeEdge) {
  const auto nadir = make_geometry(0.6, 20e3, 0.0);
  EXPECT_DOUBLE_EQ(nadir.elevation_deg, 90.0);
  EXPECT_DOUBLE_EQ(nadir.slant_distance_m, 20e3);
  const auto edge = make_geometry(0.6, 20e3, 34641.0);
  EXPECT_NEAR(edge.elevation_deg, 30.0, 1e-3);
  EXPECT_NEAR(edge.slant_distance_m, 40e3, 1.0);
}

TEST(Placement, DiskSecondMoment) {
  Scenario s;
  s.strict_table2 = false;
  const double r_max = s.radio.coverage_radius_m;
  double sum = 0.0;
  const int n = 100000;
  for (int d = 0; d < n; ++d) {
    const double r = placement_radius_draw(s, 0, static_cast<std::uint32_t>(d));
    sum += r * r;
  }
  EXPECT_NEAR(sum / n, r_max * r_max / 2.0, 0.01 * r_max * r_max / 2.0);
}

TEST(Placement, StrictTable2ClipsElevation) {
  Scenario s;
  s.n_devices = 5000;
  EXPECT_NEAR(s.placement_radius_m(), 34641.016, 1e-3);
  for (const auto& g : place_devices(s, 3)) {
    EXPECT_GE(g.elevation_deg, 30.0 - 1e-9);
    EXPECT_LE(g.slant_distance_m, 40e3 + 1e-6);
  }
  s.strict_table2 = false;
  EXPECT_EQ(s.placement_radius_m(), 35e3);
}

TEST(Placement, PipelineLineWithinSegment) {
  Scenario s;
  s.placement = Placement::pipeline_line;
  s.n_devices = 2000;
  double sum = 0.0;
  for (const auto& g : place_devices(s, 0)) {
    EXPECT_LE(g.ground_distance_m, s.placement_radius_m());
    sum += g.ground_distance_m;
  }
  // |R(2u - 1)| has mean R/2
  EXPECT_NEAR(sum / 2000.0, s.placement_radius_m() / 2.0, 0.05 * s.placement_radius_m());
}

TEST(Placement, FreezeGeometryReusesPositions) {
  Scenario s = small_scenario();
  s.freeze_geometry = true;
  const auto a = place_devices(s, 0);
  const auto b = place_devices(s, 7);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].ground_distance_m, b[i].ground_distance_m);
  s.freeze_geometry = false;
  EXPECT_NE(place_devices(s, 0)[0].ground_distance_m, place_devices(s, 7)[0].ground_distance_m);
}

TEST(PlacementNames, RoundTrip) {
  for (auto p : {Placement::disk_uniform, Placement::pipeline_line})
    EXPECT_EQ(parse_placement(to_string(p)), p);
  for (auto m : {InterferenceMode::aggregate, InterferenceMode::strongest})
    EXPECT_EQ(parse_interference(to_string(m)), m);
  EXPECT_FALSE(parse_interference("max").has_value());
}

// --- traffic ------------------------------------------------------------------

TEST(Traffic, SingleDevice) {
  Scenario s;
  s.n_devices = 1;
  const auto g = place_devices(s, 0);
  const auto a = generate_traffic(s, g, 0);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].snr_ok, demod_ok(a[0].snr_db, s.sf, s.thresholds));
  EXPECT_GT(a[0].rx_power_mw, 0.0);
}

TEST(Traffic, StartsInsideWindow) {
  Scenario s;
  s.wet_duration_s = 1700;
  const auto a = generate_traffic(s, place_devices(s, 1), 1);
  ASSERT_EQ(a.size(), 10000u);
  for (const auto& p : a) {
    EXPECT_GE(p.start_s, 0.0);
    EXPECT_LE(p.start_s, s.tx_window_s() - s.toa_s());
    EXPECT_LE(p.start_s + p.duration_s, s.tx_window_s());
    EXPECT_EQ(p.duration_s, s.toa_s());
    EXPECT_LT(p.channel, 64u);
  }
}

TEST(Traffic, ChannelHistogramUniform) {
  Scenario s;
  const auto a = generate_traffic(s, place_devices(s, 0), 0);
  std::vector<double> counts(64, 0.0);
  for (const auto& p : a) counts[p.channel] += 1.0;
  const double expected = 10000.0 / 64.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi-square, 63 dof, upper 0.001 quantile
  EXPECT_LT(chi2, 103.4);
}

TEST(Traffic, RejectsWindowShorterThanFrame) {
  Scenario s;
  s.sf = 12;
  s.wet_duration_s = s.report_period_s - 1.0;
  EXPECT_THROW(validate(s), ScenarioInvalid);
  EXPECT_THROW(simulate(s), ScenarioInvalid);
}

TEST(ScenarioValidation, Errors) {
  Scenario s;
  s.n_devices = 0;
  EXPECT_THROW(validate(s), ScenarioInvalid);
  s = {};
  s.n_channels = 0;
  EXPECT_THROW(validate(s), ScenarioInvalid);
  s = {};
  s.wet_duration_s = 1800;
  EXPECT_THROW(validate(s), ScenarioInvalid);
  s = {};
  s.wet_duration_s = -1;
  EXPECT_THROW(validate(s), ScenarioInvalid);
  s = {};
  s.soil.vwc = 1.0;
  EXPECT_THROW(validate(s), ScenarioInvalid);
  s = {};
  s.wet_duration_s = 0.0;
  EXPECT_NO_THROW(validate(s));
  // the window may hold exactly one frame
  s.wet_duration_s = s.report_period_s - s.toa_s();
  EXPECT_NO_THROW(validate(s));
  EXPECT_EQ(start_window_s(s), 0.0);
}

// --- collisions ---------------------------------------------------------------

TEST(Collisions, Examples) {
  const DemodThresholds t;
  std::vector<PacketAttempt> one{attempt(0, 0.0, 1.0, 0, 1.0)};
  EXPECT_EQ(resolve_collisions(one, t, InterferenceMode::aggregate), std::vector<bool>{true});

  std::vector<PacketAttempt> equal{attempt(0, 0.0, 1.0, 0, 1.0), attempt(1, 0.0, 1.0, 0, 1.0)};
  EXPECT_EQ(resolve_collisions(equal, t, InterferenceMode::aggregate), (std::vector<bool>{false, false}));

  std::vector<PacketAttempt> capture{attempt(0, 0.0, 1.0, 0, 10.0), attempt(1, 0.3, 1.0, 0, 1.0)};
  EXPECT_EQ(resolve_collisions(capture, t, InterferenceMode::aggregate), (std::vector<bool>{true, false}));
}

TEST(Collisions, TouchingAndOtherChannelsDoNotCollide) {
  const DemodThresholds t;
  std::vector<PacketAttempt> touching{attempt(0, 0.0, 1.0, 0, 1.0), attempt(1, 1.0, 1.0, 0, 1.0)};
  EXPECT_EQ(resolve_collisions(touching, t, InterferenceMode::aggregate), (std::vector<bool>{true, true}));
  std::vector<PacketAttempt> split{attempt(0, 0.0, 1.0, 0, 1.0), attempt(1, 0.0, 1.0, 1, 1.0)};
  EXPECT_EQ(resolve_collisions(split, t, InterferenceMode::aggregate), (std::vector<bool>{true, true}));
}

TEST(Collisions, AggregateVersusStrongest) {
  const DemodThresholds t;
  // two interferers each 7 dB down: strongest passes, their sum (4 dB down) does not
  const double p = std::pow(10.0, -0.7);
  std::vector<PacketAttempt> a{attempt(0, 0.0, 1.0, 0, 1.0), attempt(1, 0.2, 1.0, 0, p),
                               attempt(2, -0.2, 1.0, 0, p)};
  EXPECT_FALSE(resolve_collisions(a, t, InterferenceMode::aggregate)[0]);
  EXPECT_TRUE(resolve_collisions(a, t, InterferenceMode::strongest)[0]);
}

TEST(Collisions, MixedSfIsContractViolation) {
  std::vector<PacketAttempt> a{attempt(0, 0.0, 1.0, 0, 1.0), attempt(1, 5.0, 1.0, 0, 1.0)};
  a[1].sf = 10;
  EXPECT_THROW(resolve_collisions(a, {}, InterferenceMode::aggregate), ContractViolation);
}

TEST(Collisions, OracleEquivalenceOnRandomInstances) {
  std::mt19937_64 gen(12345);
  const DemodThresholds t;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = random_instance(gen);
    for (auto mode : {InterferenceMode::aggregate, InterferenceMode::strongest})
      ASSERT_EQ(resolve_collisions(inst, t, mode), oracle::brute_force(inst, t, mode)) << "instance " << i;
  }
}

TEST(Collisions, SimulatedTrafficMatchesOracle) {
  Scenario s;
  s.n_devices = 50;
  s.n_channels = 1;
  s.wet_duration_s = 1790;
  for (std::uint64_t trial = 0; trial < 10000; ++trial) {
    const auto a = generate_traffic(s, place_devices(s, trial), trial);
    for (auto mode : {InterferenceMode::aggregate, InterferenceMode::strongest})
      ASSERT_EQ(resolve_collisions(a, s.thresholds, mode), oracle::brute_force(a, s.thresholds, mode))
          << "trial " << trial;
  }
}

// --- simulate -----------------------------------------------------------------

TEST(Simulate, SingleDeviceAboveThreshold) {
  Scenario s;
  s.n_devices = 1;
  s.sf = 12;
  s.trials = 10;
  const auto r = simulate(s);
  EXPECT_EQ(r.p_snr, 1.0);
  EXPECT_EQ(r.p_sir, 1.0);
  EXPECT_EQ(r.p_s, 1.0);
  EXPECT_EQ(r.trials_run, 10);
}

TEST(Simulate, TwoNodesWindowOfTwoFramesAlwaysCollide) {
  Scenario s;
  s.n_devices = 2;
  s.n_channels = 1;
  s.sf = 12;
  s.radio.coverage_radius_m = 1.0;
  s.trials = 2000;
  s.wet_duration_s = s.report_period_s - 2.0 * s.toa_s();
  const auto r = simulate(s);
  EXPECT_NEAR(oracle::two_node_no_overlap(start_window_s(s), s.toa_s()), 0.0, 1e-20);
  EXPECT_EQ(r.p_sir, 0.0);
}

TEST(Simulate, TwoNodesMatchClosedForm) {
  Scenario s;
  s.n_devices = 2;
  s.n_channels = 1;
  s.sf = 12;
  s.radio.coverage_radius_m = 1.0;
  s.trials = 20000;
  s.wet_duration_s = s.report_period_s - 4.0 * s.toa_s();
  const double p = oracle::two_node_no_overlap(start_window_s(s), s.toa_s());
  EXPECT_NEAR(p, 4.0 / 9.0, 1e-9);
  const auto r = simulate(s);
  EXPECT_NEAR(r.p_sir, p, 3.0 * std::sqrt(p * (1 - p) / s.trials));
}

TEST(Simulate, ConditionalFallbackWhenNothingDecodes) {
  Scenario s = small_scenario();
  s.sf = 7;  // in-situ SNR is below -6 dB everywhere
  const auto r = simulate(s);
  EXPECT_EQ(r.p_snr, 0.0);
  EXPECT_EQ(r.p_s, 0.0);
  EXPECT_EQ(r.p_sir, r.p_sir_unconditional);
}

TEST(Simulate, ReportsProductDiagnostic) {
  const auto r = simulate(small_scenario());
  EXPECT_DOUBLE_EQ(r.p_s_product, r.p_snr * r.p_sir);
}

// --- sweep evaluator --------------------------------------------------------------

TEST(WetSweepEvaluator, BitIdenticalToSimulate) {
  for (auto mode : {InterferenceMode::aggregate, InterferenceMode::strongest}) {
    Scenario s;
    s.n_devices = 3000;
    s.trials = 8;
    s.n_channels = 8;
    s.interference = mode;
    const WetSweepEvaluator ev(s);
    for (double t_w : {0.0, 600.0, 1200.0, 1700.0, 1790.0, ev.max_wet_duration_s()}) {
      Scenario probe = s;
      probe.wet_duration_s = t_w;
      EXPECT_EQ(ev.evaluate(t_w), simulate(probe)) << "t_w=" << t_w << " mode=" << to_string(mode);
    }
  }
}

// --- properties -------------------------------------------------------------

TEST(NetworkSimProperty, SuccessBoundedByComponents) {
  for (int sf = 7; sf <= 12; ++sf) {
    Scenario s = small_scenario();
    s.sf = sf;
    s.wet_duration_s = 1750;
    const auto r = simulate(s);
    EXPECT_LE(r.p_s, r.p_snr);
    EXPECT_LE(r.p_s, r.p_sir + r.ci_halfwidth + 1e-12);
    for (double p : {r.p_snr, r.p_sir, r.p_s}) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(NetworkSimProperty, SirNondecreasingInWindowPathwise) {
  // same seeds: a longer window scales all gaps up, so interferer sets shrink
  Scenario s;
  s.n_devices = 2000;
  s.n_channels = 4;
  s.trials = 5;
  double prev = -1.0;
  for (double t_w = 1795; t_w >= 1000; t_w -= 100) {
    s.wet_duration_s = t_w;
    const auto r = simulate(s);
    EXPECT_GE(r.p_sir_unconditional, prev) << "t_w=" << t_w;
    prev = r.p_sir_unconditional;
  }
}

TEST(NetworkSimProperty, SirNonincreasingInLoad) {
  Scenario s;
  s.sf = 10;  // every attempt decodes in-situ
  s.wet_duration_s = 1750;
  s.trials = 40;
  double prev = 2.0;
  double prev_ci = 0.0;
  for (int n : {500, 1000, 2000, 5000, 10000}) {
    s.n_devices = n;
    const auto r = simulate(s);
    EXPECT_LE(r.p_sir, prev + prev_ci + r.ci_halfwidth) << "N=" << n;
    prev = r.p_sir;
    prev_ci = r.ci_halfwidth;
  }
}

TEST(NetworkSimProperty, ChannelThinning) {
  auto make = [](int n, int channels, int trials) {
    Scenario s;
    s.sf = 12;
    s.soil.vwc = 0.05;
    s.burial_depth_m = 0.4;
    s.n_devices = n;
    s.n_channels = channels;
    s.trials = trials;
    s.wet_duration_s = s.report_period_s - 8.0;
    return s;
  };
  // co-channel others are Binomial(N - 1, 1 / N_c); mix single-channel
  // runs with k others by that pmf
  for (const auto& [n, nc] : {std::pair{641, 64}, std::pair{321, 32}}) {
    const auto many = simulate(make(n, nc, 400));
    const double q = 1.0 / nc;
    double mixed = 0.0, mixed_ci = 0.0, mass = 0.0;
    for (int k = 0; k <= 30; ++k) {
      const double w = std::exp(std::lgamma(n) - std::lgamma(k + 1) - std::lgamma(n - k) +
                                k * std::log(q) + (n - 1 - k) * std::log1p(-q));
      const auto one = simulate(make(k + 1, 1, 3000));
      mixed += w * one.p_sir;
      mixed_ci += w * one.ci_halfwidth;
      mass += w;
    }
    ASSERT_GT(mass, 1.0 - 1e-6);
    EXPECT_NEAR(many.p_sir, mixed, many.ci_halfwidth + mixed_ci) << n << "/" << nc;
  }
}

TEST(NetworkSimProperty, DeterministicAcrossWorkerCounts) {
  Scenario s;
  s.n_devices = 5000;
  s.trials = 12;
  setenv("SAGUIN_WORKERS", "1", 1);
  const auto serial = simulate(s);
  setenv("SAGUIN_WORKERS", "3", 1);
  const auto threaded = simulate(s);
  const auto again = simulate(s);
  unsetenv("SAGUIN_WORKERS");
  EXPECT_EQ(serial, threaded);
  EXPECT_EQ(threaded, again);
}

TEST(NetworkSimProperty, SeedsChangeResults) {
  Scenario s = small_scenario();
  s.wet_duration_s = 1790;
  const auto a = simulate(s);
  s.traffic_seed = 99;
  EXPECT_NE(simulate(s).p_sir, a.p_sir);
}
