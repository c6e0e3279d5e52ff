#include <gtest/gtest.h>

#include "nlslab/data.hpp"
#include "nlslab/solver.hpp"
#include "support.hpp"

using namespace nlslab;
using namespace testing_support;

namespace {

const char* kGeneric = "1 + 0.25*cos(x1-x3) + 0.3*exp(-(x2-1)^2/4)";

GridSpec coarse_grid() {
  GridSpec g;
  g.num_points = 256;
  g.circumference = 2 * kPi * 8;
  return g;
}

Field packet(const GridSpec& g, double amplitude, double width = 3.0, double carrier = 0.0) {
  return packet_field(g, {PacketSpec{amplitude, 0.0, width, carrier}});
}

Field shifted(const Field& u, double s) {
  CVec spec = u.spectrum();
  for (int j = 0; j < u.grid.num_points; ++j) spec[j] *= std::polar(1.0, u.grid.mode(j) * u.grid.dk() * s);
  return Field::from_spectrum(u.grid, spec);
}

double mass(const CVec& c, double L) {
  double s = 0;
  for (const auto& v : c) s += std::norm(v);
  return L * s;
}

}  // namespace

TEST(LinearPropagate, IdentityAtTimeZero) {
  const GridSpec g = commensurate_grid(1024);
  const Field u = random_band_field(g, -3, 3, 1);
  EXPECT_LT(max_diff(linear_propagate(u, 0.0).samples, u.samples), 1e-14);
}

TEST(LinearPropagate, SingleModePhase) {
  const GridSpec g = commensurate_grid(1024);
  const int m = 48;
  const double xi = m * g.dk(), t = 1.7;
  CVec spec(g.num_points);
  spec[g.slot(m)] = 1.0;
  const CVec out = linear_propagate(Field::from_spectrum(g, spec), t).spectrum();
  EXPECT_LT(std::abs(out[g.slot(m)] - std::polar(1.0, -xi * xi * t)), 1e-14);
  EXPECT_NEAR(std::abs(out[g.slot(m)]), 1.0, 1e-14);
}

TEST(LinearPropagate, GalileanCovariance) {
  const GridSpec g = commensurate_grid(1024);
  const Field u0 = random_band_field(g, -2, 2, 2);
  const double k = 0.5, t = 1.3;
  Field mod = u0;
  for (int j = 0; j < g.num_points; ++j) mod.samples[j] *= std::polar(1.0, -k * g.x(j));
  const Field direct = linear_propagate(mod, t);
  const Field moved = shifted(linear_propagate(u0, t), 2 * k * t);
  Field v = moved;
  for (int j = 0; j < g.num_points; ++j) v.samples[j] *= std::polar(1.0, -(k * g.x(j) + k * k * t));
  EXPECT_LT(max_diff(v.samples, direct.samples), 1e-10);
}

TEST(Simulate, ZeroSymbolIsLinearFlow) {
  const GridSpec g = commensurate_grid(1024);
  const Field u0 = packet(g, 0.1);
  SolverConfig cfg;
  cfg.band = band_for(g, -2, 2);
  cfg.horizon = 10;
  cfg.snapshot_every = 1.0;
  cfg.dt = 1e-2;
  const Trajectory tr = simulate(u0, TrilinearSymbol::constant(0), cfg);
  const Field ref = linear_propagate(u0, 10.0);
  EXPECT_LT(max_diff(tr.field(tr.states.size() - 1).samples, ref.samples), 1e-10);
}

TEST(Simulate, IntegrableMassConserved) {
  const GridSpec g = commensurate_grid(1024);
  Field u0 = packet(g, 1.0);
  u0 = with_norm(u0, 0.1);
  SolverConfig cfg;
  cfg.band = band_for(g, -2, 2);
  cfg.horizon = 10;
  const Trajectory tr = simulate(u0, parse_symbol("1"), cfg);
  ASSERT_FALSE(tr.aborted);
  EXPECT_NEAR(tr.eps, 0.1, 1e-12);
  const double m0 = mass(tr.states.front(), g.circumference);
  double drift = 0;
  for (const auto& s : tr.states) drift = std::max(drift, std::abs(mass(s, g.circumference) - m0));
  EXPECT_LT(std::sqrt(m0 + drift) - std::sqrt(m0), 1e-9);
  for (std::size_t i = 1; i < tr.times.size(); ++i) EXPECT_GT(tr.times[i], tr.times[i - 1]);
  EXPECT_NEAR(tr.times.back(), 10.0, 1e-12);
}

TEST(Simulate, FourthOrderOnGenericSymbol) {
  const GridSpec g = coarse_grid();
  const Field u0 = packet(g, 0.8, 2.0, 0.3);
  SolverConfig cfg;
  cfg.band = band_for(g, -1.5, 2.0);
  cfg.horizon = 1.0;
  cfg.snapshot_every = 1.0;
  cfg.dt = 0.05;
  const ConvergenceReport r = convergence_test(u0, parse_symbol(kGeneric), cfg);
  EXPECT_GT(r.temporal_order, 3.5);
  EXPECT_LT(r.temporal_order, 4.5);
  EXPECT_NEAR(r.error_dt / r.error_dt2, 16.0, 3.0);
  EXPECT_LT(r.spatial_difference, 1e-12);
}

TEST(Simulate, AnalyticDataSpectralTail) {
  const GridSpec g = coarse_grid();
  const Field u0 = packet(g, 0.1, 3.0);
  SolverConfig cfg;
  cfg.band = band_for(g, -5, 5);
  cfg.horizon = 0.5;
  cfg.snapshot_every = 0.5;
  cfg.dt = 0.02;
  const ConvergenceReport r = convergence_test(u0, parse_symbol("1"), cfg);
  EXPECT_LT(r.spectral_tail, 1e-12);
  EXPECT_TRUE(r.resolved);
  EXPECT_FALSE(r.degraded);
}

TEST(Simulate, RoughDataFlaggedDegraded) {
  const GridSpec g = coarse_grid();
  const Band band = band_for(g, -3, 3);
  std::mt19937 rng(4);
  std::normal_distribution<double> nd;
  CVec c(band.size());
  for (auto& v : c) v = 0.05 * cplx(nd(rng), nd(rng));
  const Field u0 = field_from_band(g, band, c);
  SolverConfig cfg;
  cfg.band = band;
  cfg.horizon = 0.5;
  cfg.snapshot_every = 0.5;
  cfg.dt = 0.025;
  const ConvergenceReport r = convergence_test(u0, parse_symbol("1"), cfg);
  EXPECT_FALSE(r.resolved);
  EXPECT_TRUE(r.degraded);
}

TEST(Simulate, PhaseRotationSymmetry) {
  const GridSpec g = coarse_grid();
  const Field u0 = packet(g, 0.6, 2.0, 0.4);
  Field v0 = u0;
  const cplx ph = std::polar(1.0, 1.1);
  for (auto& x : v0.samples) x *= ph;
  SolverConfig cfg;
  cfg.band = band_for(g, -1.5, 2.0);
  cfg.horizon = 1.0;
  cfg.snapshot_every = 0.5;
  cfg.dt = 0.01;
  const auto c = parse_symbol(kGeneric);
  const Trajectory a = simulate(u0, c, cfg), b = simulate(v0, c, cfg);
  CVec ra = a.states.back();
  for (auto& x : ra) x *= ph;
  EXPECT_LT(max_diff(ra, b.states.back()), 1e-10);
}

TEST(Simulate, DenseWindowStoresEveryStep) {
  const GridSpec g = coarse_grid();
  SolverConfig cfg;
  cfg.band = band_for(g, -1.5, 1.5);
  cfg.horizon = 1.0;
  cfg.snapshot_every = 0.5;
  cfg.dt = 0.01;
  cfg.dense = true;
  cfg.dense_from = 0.3;
  cfg.dense_to = 0.4;
  const Trajectory tr = simulate(packet(g, 0.5), parse_symbol("1"), cfg);
  EXPECT_EQ(tr.dense_times.size(), 11u);
  EXPECT_EQ(tr.dense_index(0.35), 5);
  EXPECT_EQ(tr.dense_index(0.5), -1);
  EXPECT_EQ(tr.times.size(), 3u);
}

TEST(Simulate, GuardsRefuseUnsafeSteps) {
  const GridSpec g = coarse_grid();
  const Field u0 = packet(g, 0.3);
  SolverConfig cfg;
  cfg.band = band_for(g, -3, 3);
  cfg.horizon = 0.5;
  cfg.dt = 0.1;  // 0.1 * 9 > 0.5
  try {
    simulate(u0, parse_symbol("1"), cfg);
    FAIL() << "expected a guard error";
  } catch (const GuardError& e) {
    EXPECT_NE(std::string(e.what()).find("reduce dt"), std::string::npos);
  }
  cfg.dt = 0.01;
  cfg.horizon = 3.0;  // group speed 6 * 3 >= 50.3 / 4
  cfg.snapshot_every = 0.5;
  EXPECT_THROW(simulate(u0, parse_symbol("1"), cfg), GuardError);
  EXPECT_THROW(
      {
        cfg.horizon = 0.555;
        cfg.snapshot_every = 0.5;
        simulate(u0, parse_symbol("1"), cfg);
      },
      ParameterError);
}

TEST(Simulate, WarnsBeyondLifespan) {
  const GridSpec g = coarse_grid();
  const Field u0 = with_norm(packet(g, 1.0), 2.0);
  SolverConfig cfg;
  cfg.band = band_for(g, -1.5, 1.5);
  cfg.horizon = 0.5;
  cfg.snapshot_every = 0.5;
  cfg.dt = 0.01;
  const Trajectory tr = simulate(u0, parse_symbol("1"), cfg);
  bool found = false;
  for (const auto& w : tr.warnings) found = found || w.find("eps^-2") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Simulate, NonFiniteStateAborts) {
  const GridSpec g = coarse_grid();
  const Field u0 = packet(g, 60.0, 2.0);
  SolverConfig cfg;
  cfg.band = band_for(g, -1.5, 1.5);
  cfg.horizon = 20.0;
  cfg.snapshot_every = 0.5;
  cfg.dt = 0.5;
  cfg.enforce_guards = false;
  const Trajectory tr = simulate(u0, parse_symbol("1"), cfg);
  EXPECT_TRUE(tr.aborted);
  EXPECT_NE(tr.abort_reason.find("non-finite"), std::string::npos);
  for (const auto& s : tr.states)
    for (const auto& v : s) EXPECT_TRUE(std::isfinite(std::abs(v)));
}
