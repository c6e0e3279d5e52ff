#pragma once

#include "nlslab/common.hpp"

namespace nlslab {

// Periodic grid x_j = -L/2 + j*L/N on a torus of circumference L, plus the
// time stepping parameters shared by every run.
struct GridSpec {
  int num_points = 16384;
  double circumference = 256.0;
  double dt = 1e-3;
  double horizon = 10.0;
  int k_max = 8;

  double dk() const { return 2.0 * kPi / circumference; }
  double dx() const { return circumference / num_points; }
  double nyquist() const { return num_points * dk() / 2.0; }
  double x(int j) const { return -circumference / 2.0 + j * dx(); }
  // Signed mode number of FFT slot j.
  int mode(int j) const { return j < num_points / 2 ? j : j - num_points; }
  int slot(int m) const { return m >= 0 ? m : m + num_points; }
  void validate() const;
};

// Contiguous range of mode numbers [lo, hi]; frequency of mode m is m*dk.
struct Band {
  int lo = 0;
  int hi = -1;
  int size() const { return hi - lo + 1; }
  bool contains(int m) const { return m >= lo && m <= hi; }
  bool operator==(const Band&) const = default;
};

// Smallest band holding every frequency in [xi_lo, xi_hi].
Band band_for(const GridSpec& g, double xi_lo, double xi_hi);

struct Field {
  GridSpec grid;
  CVec samples;

  static Field zeros(const GridSpec& g) { return Field{g, CVec(g.num_points)}; }
  // Fourier series coefficients u_m with u(x) = sum_m u_m e^{i m dk x}, FFT slot order.
  CVec spectrum() const;
  static Field from_spectrum(const GridSpec& g, const CVec& coeffs);
  double norm() const;
};

CVec band_coeffs(const Field& u, Band b);
Field field_from_band(const GridSpec& g, Band b, const CVec& coeffs);

// phi(x) = exp(-1/(1-x^2)) on (-1,1).
double mollifier(double x);
// psi = phi / sum_j phi(. - j); translates sum to one.
double unit_bump(double x);

struct UnitPartition {
  int k_max = 8;
  double operator()(int k, double xi) const { return unit_bump(xi - k); }
  double sum(double xi) const;
};

UnitPartition make_partition(int k_max);

Field project(const Field& u, int k);
Field project_interval(const Field& u, int a, int b);
// Band-coefficient variant used by the diagnostics.
CVec project_band(const CVec& coeffs, Band b, double dk, int k);

// Unit-scale partition of the torus into translates chi_j, j = 0..cells-1.
struct SpatialPartition {
  double circumference = 256.0;
  int cells = 256;

  static SpatialPartition unit(double circumference);
  double spacing() const { return circumference / cells; }
  double center(int j) const { return -circumference / 2.0 + j * spacing(); }
  double chi(int j, double x) const;
};

// a(xi, eta) = a0(xi) a0(eta), a0 = amplitude * psi((xi - center)/width).
struct Localizer {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
  bool identity = false;  // a == 1

  static Localizer unit_bin(int k) { return Localizer{double(k), 1.0, 1.0, false}; }
  static Localizer everywhere() { return Localizer{0.0, 1.0, 1.0, true}; }

  double a0(double xi) const {
    return identity ? amplitude : amplitude * unit_bump((xi - center) / width);
  }
  double a(double xi, double eta) const { return a0(xi) * a0(eta); }
  // Support interval of a0; infinite when identity.
  double support_lo() const { return center - width; }
  double support_hi() const { return center + width; }
};

}  // namespace nlslab
