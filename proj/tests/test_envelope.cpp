#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "nlslab/data.hpp"
#include "nlslab/envelope.hpp"
#include "support.hpp"

using namespace nlslab;
using namespace testing_support;

namespace {

Envelope random_envelope(int k_max, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Envelope c = Envelope::zeros(k_max);
  for (auto& v : c.values) v = u(rng) * u(rng);
  return c;
}

// Direct window averages, every radius.
Envelope brute_maximal(const Envelope& c) {
  Envelope m = Envelope::zeros(c.k_max);
  const int K = c.k_max;
  for (int k = -K; k <= K; ++k)
    for (int j = 0; j <= 2 * K; ++j) {
      double s = 0;
      for (int l = k - j; l <= k + j; ++l)
        if (l >= -K && l <= K) s += c.at(l);
      m.at(k) = std::max(m.at(k), s / (2 * j + 1));
    }
  return m;
}

}  // namespace

TEST(Maximal, IndicatorAverages) {
  Envelope c = Envelope::zeros(8);
  c.at(0) = 1;
  const Envelope m = maximal_function(c);
  EXPECT_DOUBLE_EQ(m.at(0), 1.0);
  EXPECT_DOUBLE_EQ(m.at(1), 1.0 / 3);
  EXPECT_DOUBLE_EQ(m.at(2), 1.0 / 5);
}

TEST(Maximal, ConstantInteriorAndEdges) {
  Envelope c = Envelope::zeros(8);
  for (auto& v : c.values) v = 1;
  const Envelope m = maximal_function(c);
  EXPECT_DOUBLE_EQ(m.at(0), 1.0);
  EXPECT_DOUBLE_EQ(m.at(8), 1.0);  // radius 0 window
  for (double v : m.values) EXPECT_LE(v, 1.0);
}

TEST(Maximal, MatchesBruteForceAndDominates) {
  std::mt19937 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Envelope c = random_envelope(8, rng);
    const Envelope m = maximal_function(c), b = brute_maximal(c);
    for (int k = -8; k <= 8; ++k) {
      EXPECT_NEAR(m.at(k), b.at(k), 1e-14);
      EXPECT_GE(m.at(k), c.at(k));
    }
  }
}

TEST(Maximal, Sublinear) {
  std::mt19937 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Envelope f = random_envelope(8, rng), g = random_envelope(8, rng);
    Envelope s = f;
    for (int k = -8; k <= 8; ++k) s.at(k) += g.at(k);
    const Envelope ms = maximal_function(s), mf = maximal_function(f), mg = maximal_function(g);
    for (int k = -8; k <= 8; ++k) EXPECT_LE(ms.at(k), mf.at(k) + mg.at(k) + 1e-15);
  }
}

TEST(Admissibilize, IndicatorAtZero) {
  Envelope c0 = Envelope::zeros(8);
  c0.at(0) = 1;
  const Envelope c = admissibilize(c0, 4.0);
  EXPECT_GE(c.at(0), 1.0);
  EXPECT_LE(c.at(0), 2.0);
  EXPECT_LE(c.norm(), 2.0);
  EXPECT_TRUE(c.admissible);
}

TEST(Admissibilize, AlreadyMaximalEnvelopeAtMostDoubles) {
  Envelope c0 = Envelope::zeros(8);
  for (auto& v : c0.values) v = 1;
  const Envelope c = admissibilize(c0, 4.0);
  for (int k = -8; k <= 8; ++k) EXPECT_LE(c.at(k), 2.0 * c0.at(k));
}

TEST(Admissibilize, BoundsOnRandomInput) {
  std::mt19937 rng(7);
  for (int t = 0; t < 100; ++t) {
    const Envelope c0 = random_envelope(8, rng);
    const Envelope c = admissibilize(c0, 4.0);
    const Envelope m = brute_maximal(c);
    EXPECT_LE(c.norm(), 2.0 * c0.norm());
    for (int k = -8; k <= 8; ++k) {
      EXPECT_GE(c.at(k), c0.at(k));
      EXPECT_LE(m.at(k), 2.0 * 4.0 * c.at(k));
    }
  }
}

TEST(Admissibilize, RejectsSmallConstant) {
  EXPECT_THROW(admissibilize(Envelope::zeros(4), 1.0), ParameterError);
}

TEST(EnvelopeOf, SinglePacketPeaksAtItsBin) {
  const GridSpec g = commensurate_grid();
  const Field u = with_norm(packet_field(g, {{1.0, 0.0, 6.0, 3.0}}), 0.1);
  const Envelope c = envelope_of(u, 0.1, make_partition(8));
  int arg = -8;
  for (int k = -8; k <= 8; ++k)
    if (c.at(k) > c.at(arg)) arg = k;
  EXPECT_EQ(arg, 3);
  EXPECT_GE(c.norm(), 1.0 - 1e-12);
  EXPECT_LE(c.norm(), 2.0);
  for (int k = -8; k <= 8; ++k) EXPECT_LE(project(u, k).norm(), 0.1 * c.at(k) * (1 + 1e-12));
}

TEST(EnvelopeOf, TwoPacketsDecayBetweenBins) {
  const GridSpec g = commensurate_grid();
  const Field u = with_norm(packet_field(g, {{1.0, -20.0, 6.0, -5.0}, {1.0, 20.0, 6.0, 5.0}}), 0.1);
  const Envelope c = envelope_of(u, 0.1, make_partition(8));
  EXPECT_GT(c.at(-5), c.at(-2));
  EXPECT_GT(c.at(5), c.at(2));
  // Direct Neumann series from the bin norms.
  Envelope c0 = Envelope::zeros(8);
  double sum = 0;
  for (int k = -8; k <= 8; ++k) {
    c0.at(k) = project(u, k).norm();
    sum += c0.at(k) * c0.at(k);
  }
  const double fraction = std::sqrt(sum) / u.norm();
  for (auto& v : c0.values) v /= 0.1 * fraction;
  Envelope direct = c0, term = c0;
  for (int m = 1; m < 80; ++m) {
    term = brute_maximal(term);
    for (auto& v : term.values) v /= 8.0;
    for (int k = -8; k <= 8; ++k) direct.at(k) += term.at(k);
  }
  for (int k = -8; k <= 8; ++k) EXPECT_NEAR(c.at(k), direct.at(k), 1e-12 * direct.norm());
  // Maximal-function tail from the bump at 5.
  for (int k = -1; k <= 4; ++k) EXPECT_GE(c.at(k), c0.at(5) / (8.0 * (2 * (5 - k) + 1)));
}

TEST(EnvelopeOf, ZeroFieldIsDegenerate) {
  const GridSpec g = commensurate_grid();
  const Envelope c = envelope_of(Field::zeros(g), 0.1, make_partition(8));
  EXPECT_TRUE(c.degenerate);
  for (double v : c.values) EXPECT_EQ(v, 0.0);
}

TEST(IntervalMass, Additivity) {
  std::mt19937 rng(9);
  const Envelope c = random_envelope(8, rng);
  EXPECT_DOUBLE_EQ(interval_mass(c, 3, 3), c.at(3));
  EXPECT_NEAR(interval_mass(c, -8, 8), c.norm(), 1e-14);
  EXPECT_NEAR(std::pow(interval_mass(c, -2, 1), 2) + std::pow(interval_mass(c, 2, 5), 2),
              std::pow(interval_mass(c, -2, 5), 2), 1e-14);
  EXPECT_THROW(interval_mass(c, 4, 3), DomainError);
}

TEST(EnvelopeCsv, Header) {
  std::ostringstream os;
  write_envelope_csv(os, Envelope::zeros(1));
  EXPECT_EQ(os.str().substr(0, 6), "k,c_k\n");
}
