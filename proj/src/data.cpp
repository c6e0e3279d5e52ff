#include "nlslab/data.hpp"

#include <cmath>
#include <random>

namespace nlslab {

Field packet_field(const GridSpec& g, const std::vector<PacketSpec>& packets) {
  Field u = Field::zeros(g);
  const double L = g.circumference;
  for (const auto& p : packets) {
    if (!(p.width > 0)) throw ParameterError("packet width must be positive");
    // Sum over images, each carrying its own phase, so the result is smooth
    // and periodic for any carrier.
    const int images = static_cast<int>(std::ceil(9 * p.width / L)) + 1;
    for (int j = 0; j < g.num_points; ++j) {
      const double x = g.x(j);
      cplx acc = 0;
      for (int n = -images; n <= images; ++n) {
        const double d = x - p.center - n * L;
        acc += std::exp(-d * d / (2 * p.width * p.width)) * std::polar(1.0, p.carrier * (x - n * L));
      }
      u.samples[j] += p.amplitude * acc;
    }
  }
  return u;
}

Field with_norm(Field u, double eps) {
  const double n = u.norm();
  if (n == 0) return u;
  for (auto& v : u.samples) v *= eps / n;
  return u;
}

Field random_phase_field(const GridSpec& g, const RandomPhaseSpec& spec) {
  if (spec.bins.empty()) throw ParameterError("random-phase data needs at least one bin");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, 2 * kPi), amp(0.5, 1.0), pos(-1.0, 1.0);
  Field u = Field::zeros(g);
  for (int k : spec.bins) {
    PacketSpec p;
    p.amplitude = amp(rng);
    p.center = spec.spread * pos(rng);
    p.width = spec.width;
    p.carrier = k;
    const cplx rot = std::polar(1.0, phase(rng));
    const Field one = packet_field(g, {p});
    for (int j = 0; j < g.num_points; ++j) u.samples[j] += rot * one.samples[j];
  }
  return with_norm(u, spec.eps);
}

}  // namespace nlslab
