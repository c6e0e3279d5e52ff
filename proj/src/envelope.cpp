#include "nlslab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace nlslab {

double Envelope::norm() const {
  double s = 0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

Envelope maximal_function(const Envelope& c) {
  const int n = static_cast<int>(c.values.size());
  Envelope out = c;
  out.admissible = false;
  for (int i = 0; i < n; ++i) {
    // Running window sum; radius 0 gives c_i exactly.
    double sum = c.values[i];
    double best = sum;
    for (int j = 1; j < n; ++j) {
      if (i - j >= 0) sum += c.values[i - j];
      if (i + j < n) sum += c.values[i + j];
      best = std::max(best, sum / (2 * j + 1));
    }
    out.values[i] = best;
  }
  return out;
}

Envelope admissibilize(const Envelope& c0, double big_c) {
  if (!(big_c > 1.0)) throw ParameterError("admissibility constant must exceed 1");
  Envelope c = c0;
  Envelope term = c0;
  const double scale = c0.norm();
  const double ratio = 1.0 / (2.0 * big_c);
  // Run until the terms no longer move c in floating point, so the maximal
  // property survives truncation.
  for (int m = 1; m < 400 && scale > 0; ++m) {
    term = maximal_function(term);
    for (double& v : term.values) v *= ratio;
    bool moved = false;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      const double next = c.values[i] + term.values[i];
      if (next != c.values[i]) moved = true;
      c.values[i] = next;
    }
    if (!moved || term.norm() < 1e-300) break;
  }
  c.admissibility_constant = 2.0 * big_c;
  c.admissible = true;
  c.degenerate = scale == 0.0;
  return c;
}

Envelope envelope_of(const Field& u, double eps, const UnitPartition& partition, double big_c) {
  if (!(eps > 0)) throw ParameterError("eps must be positive");
  const int K = partition.k_max;
  Envelope c0 = Envelope::zeros(K);
  const double total = u.norm();
  if (total == 0.0) {
    Envelope z = Envelope::zeros(K);
    z.degenerate = true;
    z.admissibility_constant = 2.0 * big_c;
    return z;
  }
  const Band b = band_for(u.grid, -K - 1.0, K + 1.0);
  const CVec coeffs = band_coeffs(u, b);
  const double L = u.grid.circumference;
  double sum_sq = 0.0;
  for (int k = -K; k <= K; ++k) {
    const CVec uk = project_band(coeffs, b, u.grid.dk(), k);
    double s = 0;
    for (const auto& v : uk) s += std::norm(v);
    c0.at(k) = std::sqrt(L * s);
    sum_sq += L * s;
  }
  // Overlapping bumps lose up to half the mass; rescaling by the realized
  // fraction keeps ||u_k|| <= eps c_k and makes ||c0|| = ||u||/eps.
  const double fraction = sum_sq > 0 ? std::sqrt(sum_sq) / total : 1.0;
  for (double& v : c0.values) v /= eps * fraction;
  return admissibilize(c0, big_c);
}

double interval_mass(const Envelope& c, int a, int b) {
  if (a > b) throw DomainError("empty interval");
  if (a < -c.k_max || b > c.k_max) throw DomainError("interval outside lattice range");
  double s = 0;
  for (int k = a; k <= b; ++k) s += c.at(k) * c.at(k);
  return std::sqrt(s);
}

void write_envelope_csv(std::ostream& os, const Envelope& c) {
  os << "k,c_k\n";
  os.precision(17);
  for (int k = -c.k_max; k <= c.k_max; ++k) os << k << ',' << c.at(k) << '\n';
}

}  // namespace nlslab
