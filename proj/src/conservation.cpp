#include "nlslab/conservation.hpp"

#include <cmath>
#include <ostream>

namespace nlslab {

Corrections build_corrections(const TrilinearSymbol& c, const Localizer& a, double xi0, const BandSpace& space,
                              const ResonanceThresholds& th) {
  Corrections k;
  k.space = space;
  k.c = c;
  k.a = a;
  k.xi0 = xi0;
  if (!a.identity && (a.support_lo() < space.xi(0) - 1e-12 || a.support_hi() > space.xi(space.n() - 1) + 1e-12))
    k.warnings.push_back("localizer support exceeds the dynamics band; pointwise identities lose exactness");
  k.mass = localized_division(c, a, xi0, DensityKind::Mass, th);
  k.momentum = localized_division(c, a, xi0, DensityKind::Momentum, th);
  for (const auto& w : k.momentum.warnings) k.warnings.push_back(w);
  tabulate_division(k.mass, space, k.b_m, k.r_m);
  tabulate_division(k.momentum, space, k.b_p, k.r_p);
  return k;
}

Density quadratic_density(const Localizer& a, double xi0, int kind, const BandSpace& s, const CVec& u,
                          const CVec& v) {
  switch (kind) {
    case 0: return bilinear_density([&](double x, double y) { return a.a(x, y); }, s, u, v);
    case 1:
      return bilinear_density([&](double x, double y) { return (-x - y + 2 * xi0) * a.a(x, y); }, s, u, v);
    default:
      return bilinear_density(
          [&](double x, double y) {
            const double w = x + y - 2 * xi0;
            return w * w * a.a(x, y);
          },
          s, u, v);
  }
}

Density sextic_remainder(const QuarticTensor& b, const BandSpace& s, const CVec& u, const CVec& Cu) {
  if (b.zero) return Density::zeros_like(s, 2 * (s.n() - 1));
  CVec w(Cu);
  for (auto& x : w) x *= -kI;
  Density out = quartic_density(b, s, w, u, u, u);
  out += quartic_density(b, s, u, w, u, u);
  out += quartic_density(b, s, u, u, w, u);
  out += quartic_density(b, s, u, u, u, w);
  return out;
}

Density sextic_remainder(DensityKind kind, const Corrections& k, const TrilinearForm& C, const CVec& u) {
  return sextic_remainder(kind == DensityKind::Mass ? k.b_m : k.b_p, k.space, u, C.apply(u));
}

DensitySet densities(const CVec& u, const Corrections& k, const TrilinearForm* C) {
  const BandSpace& s = k.space;
  DensitySet d;
  d.a = k.a;
  d.xi0 = k.xi0;
  d.mass = quadratic_density(k.a, 0.0, 0, s, u, u);
  d.momentum = quadratic_density(k.a, 0.0, 1, s, u, u);
  d.energy = quadratic_density(k.a, 0.0, 2, s, u, u);
  d.momentum_xi0 = quadratic_density(k.a, k.xi0, 1, s, u, u);
  d.energy_xi0 = quadratic_density(k.a, k.xi0, 2, s, u, u);
  d.b_m = quartic_density(k.b_m, s, u, u, u, u);
  d.b_p = quartic_density(k.b_p, s, u, u, u, u);
  d.r4_m = quartic_density(k.r_m, s, u, u, u, u);
  d.r4_p = quartic_density(k.r_p, s, u, u, u, u);
  if (C) {
    const CVec Cu = C->apply(u);
    d.r6_m = sextic_remainder(k.b_m, s, u, Cu);
    d.r6_p = sextic_remainder(k.b_p, s, u, Cu);
  } else {
    d.r6_m = d.r6_p = Density::zeros_like(s, 2 * (s.n() - 1));
  }
  d.m_sharp = d.mass + d.b_m;
  d.p_sharp = d.momentum_xi0 + d.b_p;
  d.flux_m = d.momentum_xi0 + d.r4_m;
  d.flux_p = d.energy_xi0 + d.r4_p;
  return d;
}

DensitySet densities(const Field& u, const TrilinearSymbol& c, const Localizer& a, double xi0) {
  const GridSpec& g = u.grid;
  const Band band = a.identity ? default_band(g) : band_for(g, a.support_lo() - 1.0, a.support_hi() + 1.0);
  const BandSpace s{g, band};
  const Corrections k = build_corrections(c, a, xi0, s);
  const TrilinearForm C(c, s);
  return densities(band_coeffs(u, band), k, &C);
}

namespace {

// M_sharp and P_sharp only, for the off-center stencil points.
void sharp_only(const CVec& u, const Corrections& k, Density& m, Density& p) {
  m = quadratic_density(k.a, 0.0, 0, k.space, u, u) + quartic_density(k.b_m, k.space, u, u, u, u);
  p = quadratic_density(k.a, k.xi0, 1, k.space, u, u) + quartic_density(k.b_p, k.space, u, u, u, u);
}

}  // namespace

FluxResidual flux_residual(const Trajectory& tr, const Corrections& k, const TrilinearForm& C, double t) {
  const int i = tr.dense_index(t);
  if (i < 2 || i + 2 >= static_cast<int>(tr.dense_states.size()))
    throw DomainError("t lies outside the dense window (needs two steps on each side)");
  const double h = tr.dt;
  Density m[5], p[5];
  for (int j = -2; j <= 2; ++j)
    if (j != 0) sharp_only(tr.dense_states[i + j], k, m[j + 2], p[j + 2]);
  const DensitySet d = densities(tr.dense_states[i], k, &C);
  m[2] = d.m_sharp;
  p[2] = d.p_sharp;

  auto fd = [&](Density* f) {
    Density out = (-1.0 / (12 * h)) * f[4];
    out += (8.0 / (12 * h)) * f[3];
    out -= (8.0 / (12 * h)) * f[1];
    out += (1.0 / (12 * h)) * f[0];
    return out;
  };
  FluxResidual r;
  r.t = t;
  r.k = k.a.center;
  r.xi0 = k.xi0;

  const Density dm = fd(m);
  const Density lhs_m = dm + (2 * k.xi0) * m[2].derivative();
  const Density rhs_m = d.flux_m.derivative() + d.r6_m;
  r.mass_residual_l2 = (lhs_m - rhs_m).l2();
  r.mass_scale = lhs_m.l2() + d.flux_m.derivative().l2();
  r.mass_relative = r.mass_scale > 0 ? r.mass_residual_l2 / r.mass_scale : r.mass_residual_l2;
  r.mass_drift = dm.integral().real();
  r.mass_remainder = d.r6_m.integral().real();

  const Density dp = fd(p);
  const Density lhs_p = dp + (2 * k.xi0) * p[2].derivative();
  const Density rhs_p = d.flux_p.derivative() + d.r6_p;
  r.momentum_residual_l2 = (lhs_p - rhs_p).l2();
  r.momentum_scale = lhs_p.l2() + d.flux_p.derivative().l2();
  r.momentum_relative = r.momentum_scale > 0 ? r.momentum_residual_l2 / r.momentum_scale : r.momentum_residual_l2;
  r.momentum_drift = dp.integral().real();
  r.momentum_remainder = d.r6_p.integral().real();
  return r;
}

void write_flux_csv(std::ostream& os, const std::vector<FluxResidual>& rows) {
  os << "t,k,xi0,mass_residual_L2,momentum_residual_L2,mass_relative,momentum_relative,"
        "mass_drift,mass_remainder,momentum_drift,momentum_remainder\n";
  os.precision(12);
  for (const auto& r : rows)
    os << r.t << ',' << r.k << ',' << r.xi0 << ',' << r.mass_residual_l2 << ',' << r.momentum_residual_l2 << ','
       << r.mass_relative << ',' << r.momentum_relative << ',' << r.mass_drift << ',' << r.mass_remainder << ','
       << r.momentum_drift << ',' << r.momentum_remainder << '\n';
}

}  // namespace nlslab
