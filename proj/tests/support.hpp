#pragma once

#include <cmath>
#include <random>

#include "nlslab/lattice.hpp"

namespace testing_support {

using namespace nlslab;

// Grid with dk = 1/32, so integer frequencies sit on modes.
inline GridSpec commensurate_grid(int n = 4096) {
  GridSpec g;
  g.num_points = n;
  g.circumference = 2 * kPi * 32;
  return g;
}

// Random smooth field whose spectrum lives in [lo, hi].
inline Field random_band_field(const GridSpec& g, double lo, double hi, unsigned seed, double amp = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  CVec spec(g.num_points);
  for (int j = 0; j < g.num_points; ++j) {
    const double xi = g.mode(j) * g.dk();
    if (xi > lo && xi < hi) {
      const double w = mollifier((2 * xi - lo - hi) / (hi - lo));
      spec[g.slot(g.mode(j))] = amp * w * cplx(nd(rng), nd(rng)) / std::sqrt(double(g.num_points));
    }
  }
  return Field::from_spectrum(g, spec);
}

inline double max_diff(const CVec& a, const CVec& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const CVec& a) {
  double m = 0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace testing_support
