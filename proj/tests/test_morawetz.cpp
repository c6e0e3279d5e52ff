#include <gtest/gtest.h>

#include <sstream>

#include "nlslab/data.hpp"
#include "nlslab/morawetz.hpp"
#include "support.hpp"

using namespace nlslab;
using namespace testing_support;

namespace {

const char* kGeneric = "1 + 0.25*cos(x1-x3) + 0.3*exp(-(x2-1)^2/4)";

GridSpec grid(int n, double periods) {
  GridSpec g;
  g.num_points = n;
  g.circumference = 2 * kPi * periods;
  return g;
}

Density density_of(const GridSpec& g, const std::vector<double>& f) {
  Field u = Field::zeros(g);
  for (int j = 0; j < g.num_points; ++j) u.samples[j] = f[j];
  const CVec spec = u.spectrum();
  Density d = Density::zeros(g.dk(), g.circumference, g.num_points / 2 - 1);
  for (int o = -d.half; o <= d.half; ++o) d.at(o) = spec[g.slot(o)];
  return d;
}

std::vector<double> bump(const GridSpec& g, double center, double width) {
  std::vector<double> f(g.num_points);
  for (int j = 0; j < g.num_points; ++j) f[j] = std::exp(-std::pow((g.x(j) - center) / width, 2) / 2);
  return f;
}

std::vector<double> random_density(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ud(-1, 1);
  double c[4], s[4];
  for (int i = 0; i < 4; ++i) c[i] = ud(rng), s[i] = ud(rng);
  std::vector<double> f(g.num_points);
  for (int j = 0; j < g.num_points; ++j) {
    const double x = g.x(j);
    double v = 2.0;
    for (int i = 0; i < 4; ++i) v += 0.4 * (c[i] * std::cos((i + 1) * 0.7 * x) + s[i] * std::sin((i + 1) * 0.7 * x));
    f[j] = v * std::exp(-x * x / 8) * (1 + 0.5 * x / (1 + x * x));
  }
  return f;
}

// Plain double sum over grid points with half weight on the diagonal.
double double_sum(const GridSpec& g, const std::vector<double>& F, const std::vector<double>& G) {
  double acc = 0, prefix = 0;
  for (int j = 0; j < g.num_points; ++j) {
    acc += F[j] * (prefix + 0.5 * G[j]);
    prefix += G[j];
  }
  return acc * g.dx() * g.dx();
}

double integral(const GridSpec& g, const std::vector<double>& f) {
  double s = 0;
  for (double v : f) s += v;
  return s * g.dx();
}

// Small torus shared by the identity checks.
BandSpace small_space() {
  const GridSpec g = grid(256, 4);
  return BandSpace{g, band_for(g, -1.5, 1.5)};
}

// Localized densities spread over several units; the window guard wants room.
BandSpace wide_torus() {
  const GridSpec g = grid(256, 8);
  return BandSpace{g, band_for(g, -1.25, 1.25)};
}

CVec packet_coeffs(const BandSpace& s, double amplitude, double carrier = 0.2, double width = 1.5) {
  return band_coeffs(packet_field(s.grid, {PacketSpec{amplitude, 0.0, width, carrier}}), s.band);
}

Trajectory dense_run(const BandSpace& s, const TrilinearSymbol& c, const CVec& u0, double dt, double from,
                     double to) {
  SolverConfig cfg;
  cfg.band = s.band;
  cfg.dt = dt;
  cfg.horizon = to;
  cfg.snapshot_every = to;
  cfg.dense = true;
  cfg.dense_from = from;
  cfg.dense_to = to;
  return simulate(u0, TrilinearForm(c, s), cfg);
}

}  // namespace

TEST(HalfPlanePairing, OrderedBumps) {
  const GridSpec g = grid(1024, 8);
  const auto F = bump(g, 5, 0.3), G = bump(g, -5, 0.3);
  const cplx v = half_plane_pairing(density_of(g, F), density_of(g, G));
  const double expect = integral(g, F) * integral(g, G);
  EXPECT_NEAR(v.real(), expect, 1e-12 * expect);
  EXPECT_LT(std::abs(half_plane_pairing(density_of(g, G), density_of(g, F))), 1e-12 * expect);
}

TEST(HalfPlanePairing, SymmetricIsHalfTheProduct) {
  const GridSpec g = grid(1024, 8);
  const auto F = random_density(g, 3);
  const Density d = density_of(g, F);
  const double m = integral(g, F);
  EXPECT_NEAR(half_plane_pairing(d, d).real(), 0.5 * m * m, 1e-12 * m * m);
}

TEST(HalfPlanePairing, MatchesDirectDoubleSum) {
  const GridSpec g = grid(1024, 8), g2 = grid(2048, 8), g4 = grid(4096, 8);
  for (unsigned seed : {1u, 2u, 5u}) {
    const auto F = random_density(g, seed), G = random_density(g, seed + 10);
    // The sum is second order in dx; two Richardson steps.
    const double s1 = double_sum(g, F, G);
    const double s2 = double_sum(g2, random_density(g2, seed), random_density(g2, seed + 10));
    const double s4 = double_sum(g4, random_density(g4, seed), random_density(g4, seed + 10));
    EXPECT_NEAR((s1 - s2) / (s2 - s4), 4.0, 0.01);
    const double direct = (16 * (4 * s4 - s2) / 3 - (4 * s2 - s1) / 3) / 15;
    const cplx v = half_plane_pairing(density_of(g, F), density_of(g, G));
    EXPECT_NEAR(v.real(), direct, 1e-10 * std::abs(direct)) << seed;
    EXPECT_LT(std::abs(v.imag()), 1e-12 * std::abs(direct));
  }
}

TEST(HalfPlanePairing, RefusesDataNearTheCut) {
  const GridSpec g = grid(1024, 8);
  const auto F = bump(g, 18, 1.0), G = bump(g, 0, 1.0);
  EXPECT_THROW(half_plane_pairing(density_of(g, F), density_of(g, G)), GuardError);
}

TEST(J4Positivity, TrivialCases) {
  const BandSpace s = small_space();
  const Localizer a = Localizer::unit_bin(0);
  const CVec u = packet_coeffs(s, 0.5);
  EXPECT_EQ(j4_positivity(u, CVec(s.n()), a, s), 0.0);
  CVec mode(s.n());
  mode[s.n() / 2 + 1] = 0.7;
  EXPECT_LT(j4_positivity(mode, mode, a, s), 1e-24);
}

TEST(J4Positivity, SymbolSideAgreesWithPhysicalSide) {
  const BandSpace s = small_space();
  for (unsigned seed : {1u, 2u, 3u}) {
    const CVec u = band_coeffs(random_band_field(s.grid, -1.4, 1.4, seed), s.band);
    const CVec v = band_coeffs(random_band_field(s.grid, -1.4, 1.4, seed + 7), s.band);
    for (const Localizer& a : {Localizer::unit_bin(0), Localizer::everywhere()}) {
      const double phys = j4_positivity(u, v, a, s);
      EXPECT_GT(phys, 0.0);
      EXPECT_NEAR(j4_symbol_side(u, v, a, 0.3, s), phys, 1e-9 * phys) << seed;
    }
  }
}

TEST(J4Positivity, TwoModeSymbol) {
  // Frequencies (1, 2, 3, 2) in the slots u, conj v, u, conj v: the symbol is
  // 4 (x1 - x4)(x2 - x3) = 4.
  const GridSpec g = grid(256, 1);
  const BandSpace s{g, band_for(g, 0, 4)};
  CVec u(s.n()), v(s.n());
  u[1 - s.band.lo] = 1.0;
  u[3 - s.band.lo] = 1.0;
  v[2 - s.band.lo] = 1.0;
  // A0 = 1; u conj(v) = e^{-ix} + e^{ix}, so 4 int |d/dx|^2 = 4 * 2 L.
  const double phys = j4_positivity(u, v, Localizer::everywhere(), s);
  EXPECT_NEAR(phys, 8 * g.circumference, 1e-10);
  EXPECT_NEAR(j4_symbol_side(u, v, Localizer::everywhere(), 0.0, s), phys, 1e-10);
}

TEST(DiagonalTrace, UnitSymbol) {
  EXPECT_LT(diagonal_trace_check(parse_symbol("1"), Localizer::unit_bin(0), 0.0), 1e-6);
}

TEST(DiagonalTrace, GenericSymbolAndScaling) {
  const auto c = parse_symbol(kGeneric);
  const Localizer a = Localizer::unit_bin(0);
  EXPECT_LT(diagonal_trace_check(c, a, 0.0, 21), 1e-6);
  Localizer b = a;
  b.amplitude = 2.0;
  for (double xi : {-0.4, 0.0, 0.3}) {
    const cplx ta = diagonal_trace(c, a, 0.0, xi), tb = diagonal_trace(c, b, 0.0, xi);
    EXPECT_NEAR(std::abs(tb - 16.0 * ta), 0.0, 1e-9 * std::abs(tb));
    EXPECT_GT(ta.real(), 0.0);
    EXPECT_GE(ta.real(), 1e-9 + 0.4 * std::pow(a.a0(xi), 4));
  }
}

TEST(Interaction, UnitSymbolSexticTermIsSixthPower) {
  const GridSpec g = grid(256, 4);
  const BandSpace s{g, band_for(g, -4, 4)};
  const auto c = parse_symbol("1");
  const TrilinearForm C(c, s);
  const Corrections k = build_corrections(c, Localizer::everywhere(), 0.0, s);
  const CVec u = packet_coeffs(s, 0.6, 0.2, 1.5);
  const InteractionComponents ic = interaction_components(u, k, k, &C, 0.0);
  const Field uf = field_from_band(g, s.band, u);
  double six = 0;
  for (const auto& z : uf.samples) six += std::pow(std::abs(z), 6);
  six *= g.dx();
  EXPECT_NEAR(ic.J6_pattern, six, 1e-10 * six);
}

TEST(Interaction, LinearFlowIsJ4) {
  const BandSpace s = wide_torus();
  const auto c = TrilinearSymbol::constant(0);
  const Corrections k = build_corrections(c, Localizer::unit_bin(0), 0.0, s);
  const Trajectory tr = dense_run(s, c, packet_coeffs(s, 0.5, 0.3), 0.005, 0.2, 0.3);
  const int last = static_cast<int>(tr.dense_times.size()) - 1;
  const InteractionReport r = interaction_diagonal(tr, k, nullptr, 0.0, 0, last);
  ASSERT_FALSE(r.t.empty());
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    EXPECT_NEAR(r.dIdt[i], r.J4[i], 1e-3 * r.scale);
    EXPECT_EQ(r.J6[i], 0.0);
    const CVec ui = tr.dense_states[tr.dense_index(r.t[i])];
    EXPECT_NEAR(r.J4[i], j4_positivity(ui, ui, Localizer::unit_bin(0), s), 1e-12 * r.scale);
  }
  EXPECT_GE(r.j4_min, -1e-12);
}

class GenericInteraction : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    space_ = new BandSpace(wide_torus());
    const auto c = parse_symbol(kGeneric);
    form_ = new TrilinearForm(c, *space_);
    k0_ = new Corrections(build_corrections(c, Localizer::unit_bin(0), 0.0, *space_));
    traj_ = new Trajectory(dense_run(*space_, c, packet_coeffs(*space_, 0.6), 0.005, 0.2, 0.4));
  }
  static void TearDownTestSuite() {
    delete traj_;
    delete k0_;
    delete form_;
    delete space_;
  }
  static BandSpace* space_;
  static TrilinearForm* form_;
  static Corrections* k0_;
  static Trajectory* traj_;
};

BandSpace* GenericInteraction::space_ = nullptr;
TrilinearForm* GenericInteraction::form_ = nullptr;
Corrections* GenericInteraction::k0_ = nullptr;
Trajectory* GenericInteraction::traj_ = nullptr;

TEST_F(GenericInteraction, IndependentOfXi0) {
  const Corrections k1 = build_corrections(parse_symbol(kGeneric), Localizer::unit_bin(0), 1.0, *space_);
  const CVec& u = traj_->dense_states[5];
  const InteractionComponents a = interaction_components(u, *k0_, *k0_, form_, 0.0);
  const InteractionComponents b = interaction_components(u, k1, k1, form_, 0.0);
  const double scale = std::abs(a.J4) + std::abs(a.I);
  EXPECT_NEAR(a.I, b.I, 1e-9 * scale);
  EXPECT_NEAR(a.J4, b.J4, 1e-9 * scale);
  EXPECT_NEAR(a.J6, b.J6, 1e-9 * scale);
  EXPECT_NEAR(a.J8, b.J8, 1e-9 * scale);
  EXPECT_NEAR(a.K8, b.K8, 1e-9 * scale);
}

TEST_F(GenericInteraction, TransversalWithEqualLocalizersIsDiagonal) {
  const InteractionReport d = interaction_diagonal(*traj_, *k0_, form_, 0.0, 10, 20);
  const InteractionReport t = interaction_transversal(*traj_, *k0_, *k0_, form_, 0.0, 10, 20);
  ASSERT_EQ(d.t.size(), t.t.size());
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    EXPECT_EQ(d.I[i], t.I[i]);
    EXPECT_EQ(d.J4[i], t.J4[i]);
    EXPECT_EQ(d.J6[i], t.J6[i]);
    EXPECT_EQ(d.K8[i], t.K8[i]);
    EXPECT_EQ(d.residual[i], t.residual[i]);
  }
}

TEST_F(GenericInteraction, ResidualIsSecondOrderInTheStencil) {
  const int mid = static_cast<int>(traj_->dense_times.size()) / 2;
  std::vector<double> res;
  for (int stride : {4, 2, 1}) {
    const InteractionReport r = interaction_diagonal(*traj_, *k0_, form_, 0.0, mid - stride, mid + stride, stride);
    res.push_back(r.residual_max / r.scale);
  }
  EXPECT_NEAR(res[0] / res[1], 4.0, 0.5);
  EXPECT_LT(res[2], 1e-5);
  EXPECT_GT(res[1] / res[2], 3.0);
}

TEST_F(GenericInteraction, J4StaysPositive) {
  const InteractionReport r =
      interaction_diagonal(*traj_, *k0_, form_, 0.0, 1, static_cast<int>(traj_->dense_times.size()) - 2, 4);
  EXPECT_GE(r.j4_min, -1e-12);
  EXPECT_LT(r.residual_max, 1e-3 * r.scale);
}

TEST_F(GenericInteraction, ResidualUniformInTranslation) {
  // The raw residual is differencing error and follows the third derivative
  // of I for each x0; the extrapolated floor is what has to stay put.
  const int mid = static_cast<int>(traj_->dense_times.size()) / 2;
  for (double x0 : {0.0, 2.5, 5.0}) {
    const InteractionReport r2 = interaction_diagonal(*traj_, *k0_, form_, x0, mid - 2, mid + 2, 2);
    const InteractionReport r1 = interaction_diagonal(*traj_, *k0_, form_, x0, mid - 1, mid + 1, 1);
    EXPECT_NEAR(r2.residual[0] / r1.residual[0], 4.0, 0.1) << x0;
    EXPECT_LT(std::abs(4 * r1.residual[0] - r2.residual[0]) / 3, 1e-9 * r1.scale) << x0;
  }
}

TEST(Interaction, CsvHeader) {
  std::ostringstream os;
  write_interaction_csv(os, InteractionReport{});
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,I,dIdt,J4,J6,J8,K8,window,residual");
}

TEST(Transversal, BilinearReadingIsBounded) {
  const GridSpec g = grid(2048, 32);
  const BandSpace s{g, band_for(g, -1.5, 9.5)};
  const Field u0 = packet_field(g, {PacketSpec{0.3, 0.0, 3.0, 0.0}, PacketSpec{0.3, -14.0, 3.0, 8.0}});
  SolverConfig cfg;
  cfg.band = s.band;
  cfg.dt = 0.005;
  cfg.horizon = 1.6;
  cfg.snapshot_every = 0.02;
  const Trajectory tr = simulate(band_coeffs(u0, s.band), TrilinearForm(TrilinearSymbol::constant(0), s), cfg);
  const BilinearReading r = transversal_bilinear_reading(tr, Localizer::unit_bin(0), Localizer::unit_bin(8), 8.0);
  EXPECT_GT(r.bilinear_integral, 0.0);
  EXPECT_GE(r.ratio, 0.25);
  EXPECT_LE(r.ratio, 4.5);
}
