#include <gtest/gtest.h>

#include "nlslab/conservation.hpp"
#include "nlslab/forms.hpp"
#include "support.hpp"

using namespace nlslab;
using namespace testing_support;

namespace {

const char* kGeneric = "1 + 0.25*cos(x1-x3) + 0.3*exp(-(x2-1)^2/4)";

GridSpec small_grid(int n, double periods) {
  GridSpec g;
  g.num_points = n;
  g.circumference = 2 * kPi * periods;
  return g;
}

// Direct frequency sum over every admissible triple.
CVec oracle(const TrilinearSymbol& c, const Field& u) {
  const GridSpec& g = u.grid;
  const CVec s = u.spectrum();
  const int W = g.num_points / 4 - 1;
  CVec out(g.num_points);
  for (int m1 = -W; m1 <= W; ++m1)
    for (int m2 = -W; m2 <= W; ++m2)
      for (int m3 = -W; m3 <= W; ++m3) {
        const cplx p = s[g.slot(m1)] * std::conj(s[g.slot(m2)]) * s[g.slot(m3)];
        if (p == cplx(0)) continue;
        out[g.slot(m1 - m2 + m3)] += c(m1 * g.dk(), m2 * g.dk(), m3 * g.dk()) * p;
      }
  return out;
}

Field rolled(const Field& u, int s) {
  Field r = u;
  const int n = u.grid.num_points;
  for (int j = 0; j < n; ++j) r.samples[((j + s) % n + n) % n] = u.samples[j];
  return r;
}

}  // namespace

TEST(ApplyTrilinear, ConstantSymbolIsCubicPower) {
  const GridSpec g = commensurate_grid(1024);
  const Field u = random_band_field(g, -3, 3, 1);
  const Field out = apply_trilinear(parse_symbol("1"), u);
  double dev = 0;
  for (int j = 0; j < g.num_points; ++j)
    dev = std::max(dev, std::abs(out.samples[j] - u.samples[j] * std::norm(u.samples[j])));
  EXPECT_LT(dev, 1e-10);
}

TEST(ApplyTrilinear, SingleMode) {
  const GridSpec g = commensurate_grid(1024);
  const auto c = parse_symbol(kGeneric);
  const int m = 64;  // xi = 2
  CVec spec(g.num_points);
  spec[g.slot(m)] = 1.0;
  const Field u = Field::from_spectrum(g, spec);
  const CVec out = apply_trilinear(c, u).spectrum();
  const cplx expect = c(2.0, 2.0, 2.0);
  for (int j = 0; j < g.num_points; ++j) EXPECT_LT(std::abs(out[j] - (j == m ? expect : cplx(0))), 1e-12);
}

TEST(ApplyTrilinear, EveryPathMatchesDirectSum) {
  const GridSpec g = small_grid(256, 8);
  const Field u = random_band_field(g, -4, 4, 2);
  const auto c = parse_symbol(kGeneric);
  const CVec ref = oracle(c, u);
  const double scale = max_abs(ref);
  for (auto st : {TrilinearStrategy::Tensor, TrilinearStrategy::LowRank, TrilinearStrategy::OnTheFly}) {
    TrilinearOptions opt;
    opt.strategy = st;
    const CVec out = apply_trilinear(c, u, opt).spectrum();
    EXPECT_LT(max_diff(out, ref), 1e-8 * scale) << static_cast<int>(st);
  }
}

TEST(ApplyTrilinear, GalerkinOutputIsTheBandRestriction) {
  const GridSpec g = small_grid(256, 8);
  const Band band = band_for(g, -3, 3);
  const BandSpace s{g, band};
  const CVec u = band_coeffs(random_band_field(g, -3, 3, 5), band);
  const TrilinearForm f(parse_symbol(kGeneric), s);
  const CVec full = f.apply_full(u), part = f.apply(u);
  const int n = s.n();
  for (int i = 0; i < n; ++i) EXPECT_LT(std::abs(part[i] - full[i + n - 1]), 1e-14);
}

TEST(ApplyTrilinear, RejectsInputBeyondHalfNyquist) {
  const GridSpec g = small_grid(256, 8);
  CVec spec(g.num_points);
  spec[g.slot(64)] = 1.0;
  EXPECT_THROW(apply_trilinear(parse_symbol("1"), Field::from_spectrum(g, spec)), DomainError);
}

TEST(ApplyTrilinear, PhaseEquivariance) {
  const GridSpec g = small_grid(256, 8);
  const Field u = random_band_field(g, -4, 4, 3);
  const auto c = parse_symbol(kGeneric);
  const cplx ph = std::polar(1.0, 0.7);
  Field v = u;
  for (auto& x : v.samples) x *= ph;
  const Field a = apply_trilinear(c, u), b = apply_trilinear(c, v);
  double dev = 0;
  for (int j = 0; j < g.num_points; ++j) dev = std::max(dev, std::abs(b.samples[j] - ph * a.samples[j]));
  EXPECT_LT(dev, 1e-12);
}

TEST(ApplyTrilinear, TranslationEquivariance) {
  const GridSpec g = small_grid(256, 8);
  const Field u = random_band_field(g, -4, 4, 4);
  const auto c = parse_symbol(kGeneric);
  const Field a = rolled(apply_trilinear(c, u), 37);
  const Field b = apply_trilinear(c, rolled(u, 37));
  EXPECT_LT(max_diff(a.samples, b.samples), 1e-10);
}

TEST(EvenDensity, UnitSymbolIsFourthPower) {
  const GridSpec g = small_grid(256, 8);
  const Band band = band_for(g, -2, 2);
  const BandSpace s{g, band};
  const CVec u = band_coeffs(random_band_field(g, -2, 2, 6), band);
  const Field uf = field_from_band(g, band, u);
  const Density d = apply_even_density(EvenForm{4, [](const double*) { return cplx(1); }}, s, {u, u, u, u});
  const CVec x = d.samples(g);
  double dev = 0, peak = 0;
  for (int j = 0; j < g.num_points; ++j) {
    const double p = std::pow(std::abs(uf.samples[j]), 4);
    dev = std::max(dev, std::abs(x[j] - p));
    peak = std::max(peak, p);
  }
  EXPECT_LT(dev, 1e-12 * (1 + peak));
}

TEST(EvenDensity, IntegralMatchesDiagonalSum) {
  const GridSpec g = small_grid(256, 8);
  const Band band = band_for(g, -2, 2);
  const BandSpace s{g, band};
  const CVec u = band_coeffs(random_band_field(g, -2, 2, 7), band);
  const CVec v = band_coeffs(random_band_field(g, -2, 2, 8), band);
  const QuarticSymbol q = quartic_mass_symbol(parse_symbol(kGeneric));
  const Density d = apply_even_density(EvenForm{4, [&](const double* x) { return q({x[0], x[1], x[2], x[3]}); }},
                                       s, {u, v, u, v});
  const cplx direct = quartic_functional(q, s, u, v, u, v);
  EXPECT_LT(std::abs(d.integral() - direct), 1e-8 * (1 + std::abs(direct)));
}

TEST(EvenDensity, ArityMismatch) {
  const GridSpec g = small_grid(256, 8);
  const BandSpace s{g, band_for(g, -1, 1)};
  const CVec u(s.n(), 1.0);
  EXPECT_THROW(apply_even_density(EvenForm{4, [](const double*) { return cplx(1); }}, s, {u, u, u}),
               ParameterError);
  EXPECT_THROW(apply_even_density(EvenForm{5, [](const double*) { return cplx(1); }}, s, {u, u, u, u, u}),
               ParameterError);
}

TEST(EvenDensity, IntegrableMassCorrectionVanishes) {
  const GridSpec g = small_grid(256, 8);
  const BandSpace s{g, band_for(g, -2, 2)};
  const CVec u = band_coeffs(random_band_field(g, -2, 2, 9), s.band);
  const Corrections k = build_corrections(parse_symbol("1"), Localizer::everywhere(), 0.0, s);
  const TrilinearForm C(parse_symbol("1"), s);
  const DensitySet d = densities(u, k, &C);
  EXPECT_LT(d.b_m.max_abs(), 1e-14);
  EXPECT_LT(d.r6_m.max_abs(), 1e-14);
}

TEST(EvenDensity, QuadraticDensitiesAreReal) {
  const GridSpec g = small_grid(256, 8);
  const BandSpace s{g, band_for(g, -2, 2)};
  const CVec u = band_coeffs(random_band_field(g, -2, 2, 10), s.band);
  for (int kind = 0; kind < 3; ++kind) {
    const CVec x = quadratic_density(Localizer::unit_bin(0), 0.4, kind, s, u, u).samples(g);
    double im = 0, scale = 0;
    for (const auto& v : x) {
      im = std::max(im, std::abs(v.imag()));
      scale = std::max(scale, std::abs(v));
    }
    EXPECT_LT(im, 1e-10 * scale) << kind;
  }
}

TEST(LowRank, ConstantHasRankOne) {
  const auto d = lowrank_approximate(parse_symbol("1"), -4, 4);
  EXPECT_TRUE(d.converged);
  EXPECT_EQ(d.rank(), 1);
  EXPECT_LT(d.sup_error, 1e-14);
}

TEST(LowRank, SeparableHasRankOne) {
  const auto d = lowrank_approximate(parse_symbol("exp(-x1^2/4)*cos(x2)*exp(-x3^2/4)"), -4, 4);
  EXPECT_TRUE(d.converged);
  EXPECT_EQ(d.rank(), 1);
  EXPECT_LT(d.sup_error, 1e-12);
}

TEST(LowRank, GaussianRankGrowsWithBox) {
  const auto c = parse_symbol("exp(-(x1-x2+x3)^2/8)");
  const auto small = lowrank_approximate(c, -2, 2, 1e-8);
  const auto large = lowrank_approximate(c, -4, 4, 1e-8);
  EXPECT_TRUE(small.converged);
  EXPECT_TRUE(large.converged);
  EXPECT_LE(small.sup_error, 1e-8);
  EXPECT_LE(large.sup_error, 1e-8);
  EXPECT_GT(large.rank(), small.rank());
  EXPECT_LT(std::abs(large.evaluate(1.0, -0.5, 2.0) - c(1.0, -0.5, 2.0)), 1e-8);
}

TEST(LowRank, RankCapFallsBackToExactSummation) {
  const GridSpec g = small_grid(256, 8);
  const BandSpace s{g, band_for(g, -4, 4)};
  TrilinearOptions opt;
  opt.strategy = TrilinearStrategy::LowRank;
  opt.max_rank = 2;
  const TrilinearForm f(parse_symbol("exp(-(x1-x2+x3)^2/8)"), s, opt);
  EXPECT_EQ(f.strategy(), TrilinearStrategy::OnTheFly);
  ASSERT_FALSE(f.warnings().empty());
  EXPECT_NE(f.warnings()[0].find("not converged"), std::string::npos);
}
