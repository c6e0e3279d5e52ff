#include "nlslab/lattice.hpp"

#include <cmath>
#include <sstream>

#include "nlslab/fft.hpp"

namespace nlslab {

void GridSpec::validate() const {
  std::ostringstream err;
  if (!fft::is_pow2(num_points)) err << "num_points must be a power of two; ";
  if (!(circumference > 0)) err << "circumference must be positive; ";
  if (!(dt > 0)) err << "dt must be positive; ";
  if (!(horizon > 0)) err << "horizon must be positive; ";
  if (k_max < 1) err << "k_max must be >= 1; ";
  if (circumference > 0 && dk() > 0.1 + 1e-12)
    err << "frequency spacing " << dk() << " exceeds 0.1 (enlarge circumference); ";
  if (circumference > 0 && nyquist() < k_max + 2)
    err << "Nyquist frequency " << nyquist() << " below k_max+2 (raise num_points); ";
  if (!err.str().empty()) throw ParameterError("grid: " + err.str());
}

Band band_for(const GridSpec& g, double xi_lo, double xi_hi) {
  const double dk = g.dk();
  Band b{static_cast<int>(std::ceil(xi_lo / dk - 1e-9)),
         static_cast<int>(std::floor(xi_hi / dk + 1e-9))};
  if (b.size() <= 0) throw DomainError("empty band");
  if (b.lo <= -g.num_points / 2 || b.hi >= g.num_points / 2)
    throw DomainError("band exceeds the grid's Nyquist range");
  return b;
}

CVec Field::spectrum() const {
  const int n = grid.num_points;
  CVec out = fft::forward(samples);
  const double inv = 1.0 / n;
  // x_0 = -L/2 contributes (-1)^m.
  for (int j = 0; j < n; ++j) out[j] *= (j % 2 ? -inv : inv);
  return out;
}

Field Field::from_spectrum(const GridSpec& g, const CVec& coeffs) {
  const int n = g.num_points;
  CVec tmp(coeffs);
  for (int j = 1; j < n; j += 2) tmp[j] = -tmp[j];
  return Field{g, fft::inverse(tmp)};
}

double Field::norm() const {
  double s = 0;
  for (const auto& v : samples) s += std::norm(v);
  return std::sqrt(s * grid.dx());
}

CVec band_coeffs(const Field& u, Band b) {
  const CVec spec = u.spectrum();
  CVec out(b.size());
  for (int m = b.lo; m <= b.hi; ++m) out[m - b.lo] = spec[u.grid.slot(m)];
  return out;
}

Field field_from_band(const GridSpec& g, Band b, const CVec& coeffs) {
  CVec spec(g.num_points);
  for (int m = b.lo; m <= b.hi; ++m) spec[g.slot(m)] = coeffs[m - b.lo];
  return Field::from_spectrum(g, spec);
}

double mollifier(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

double unit_bump(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  // Only the translates at floor(x) and floor(x)+1 can be nonzero near x.
  const double f = std::floor(x);
  double s = 0.0;
  for (double j = f - 1; j <= f + 1; ++j) s += mollifier(x - j);
  return mollifier(x) / s;
}

double UnitPartition::sum(double xi) const {
  double s = 0.0;
  for (int k = -k_max; k <= k_max; ++k) s += (*this)(k, xi);
  return s;
}

UnitPartition make_partition(int k_max) {
  if (k_max < 1) throw ParameterError("k_max must be >= 1");
  return UnitPartition{k_max};
}

namespace {

void check_bin(const GridSpec& g, int k) {
  if (k < -g.k_max || k > g.k_max)
    throw DomainError("bin " + std::to_string(k) + " outside lattice range [-" +
                      std::to_string(g.k_max) + ", " + std::to_string(g.k_max) + "]");
  if (std::abs(k) + 1 >= g.nyquist())
    throw DomainError("bin " + std::to_string(k) + " exceeds the Nyquist band");
}

Field multiply_spectrum(const Field& u, int a, int b) {
  const GridSpec& g = u.grid;
  CVec spec = u.spectrum();
  const double dk = g.dk();
  for (int j = 0; j < g.num_points; ++j) {
    const double xi = g.mode(j) * dk;
    double w = 0.0;
    if (xi > a - 1 && xi < b + 1)
      for (int k = a; k <= b; ++k) w += unit_bump(xi - k);
    spec[j] *= w;
  }
  return Field::from_spectrum(g, spec);
}

}  // namespace

Field project(const Field& u, int k) {
  check_bin(u.grid, k);
  return multiply_spectrum(u, k, k);
}

Field project_interval(const Field& u, int a, int b) {
  if (a > b) throw DomainError("empty interval");
  check_bin(u.grid, a);
  check_bin(u.grid, b);
  return multiply_spectrum(u, a, b);
}

CVec project_band(const CVec& coeffs, Band b, double dk, int k) {
  CVec out(coeffs.size());
  for (int m = b.lo; m <= b.hi; ++m) out[m - b.lo] = coeffs[m - b.lo] * unit_bump(m * dk - k);
  return out;
}

SpatialPartition SpatialPartition::unit(double circumference) {
  const int cells = std::max(3, static_cast<int>(std::lround(circumference)));
  return SpatialPartition{circumference, cells};
}

double SpatialPartition::chi(int j, double x) const {
  double d = x - center(j);
  d -= circumference * std::floor(d / circumference + 0.5);
  return unit_bump(d / spacing());
}

}  // namespace nlslab
