#include "nlslab/morawetz.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

void guard_window(const Density& F, double tol, const char* which) {
  GridSpec g;
  g.circumference = F.circumference;
  g.num_points = std::max(64, fft::next_pow2(8 * F.half + 8));
  const CVec v = F.samples(g);
  double peak = 0, outer = 0;
  for (int j = 0; j < g.num_points; ++j) {
    const double a = std::abs(v[j]);
    peak = std::max(peak, a);
    if (std::abs(g.x(j)) > g.circumference / 4) outer = std::max(outer, a);
  }
  if (peak > 0 && outer > tol * peak) {
    std::ostringstream os;
    os << which << " density reaches " << outer / peak
       << " of its peak outside the central half of the torus; enlarge the circumference";
    throw GuardError(os.str());
  }
}

double sign_pow(int o) { return (o % 2 == 0) ? 1.0 : -1.0; }

// F(L/2), equal to F(-L/2).
double edge_value(const Density& F) {
  cplx s = 0;
  for (int o = -F.half; o <= F.half; ++o) s += sign_pow(o) * F.at(o);
  return s.real();
}

// Boundary part of d/dt of the half-plane pairing of F, G with
// (dt + 2 xi0 dx) F = dx f + ..., same for G with g.
double window_term(const Density& F, const Density& f, const Density& G, const Density& g, double xi0) {
  const double iF = F.integral().real(), iG = G.integral().real();
  return edge_value(f) * iG - edge_value(g) * iF - 2 * xi0 * (edge_value(F) * iG - edge_value(G) * iF);
}

}  // namespace

cplx half_plane_pairing(const Density& F, const Density& G, double guard_tol) {
  guard_window(F, guard_tol, "first");
  guard_window(G, guard_tol, "second");
  const double L = F.circumference;
  const double dk = F.dk;
  // int_{-L/2}^{x} G = G_0 (x + L/2) + sum_{p != 0} G_p (e^{i p dk x} - (-1)^p) / (i p dk)
  cplx s = 0;
  const cplx F0 = F.at(0), G0 = G.at(0);
  // G_0 * int F(x) (x + L/2) dx
  cplx lin = F0 * (L * L / 2);
  for (int o = -F.half; o <= F.half; ++o)
    if (o != 0) lin += F.at(o) * (L * sign_pow(o)) / cplx(0, o * dk);
  s += G0 * lin;
  for (int p = -G.half; p <= G.half; ++p) {
    if (p == 0) continue;
    s += G.at(p) / cplx(0, p * dk) * (L * F.at(-p) - sign_pow(p) * L * F0);
  }
  return s;
}

InteractionComponents interaction_components(const CVec& u, const Corrections& ka, const Corrections& kb,
                                             const TrilinearForm* C, double x0) {
  const DensitySet du = densities(u, ka, C);
  const DensitySet dw = (&ka == &kb) ? du : densities(u, kb, C);
  auto tr = [&](const Density& d) { return d.translated(x0); };
  const Density Mv = tr(dw.mass), Pv = tr(dw.momentum_xi0), Ev = tr(dw.energy_xi0);
  const Density Bmv = tr(dw.b_m), Bpv = tr(dw.b_p), Rmv = tr(dw.r4_m), Rpv = tr(dw.r4_p);
  const Density R6mv = tr(dw.r6_m), R6pv = tr(dw.r6_p);
  const Density Msv = tr(dw.m_sharp), Psv = tr(dw.p_sharp);

  const Density& Mu = du.mass;
  const Density& Pu = du.momentum_xi0;
  const Density& Eu = du.energy_xi0;
  auto ip = [](const Density& a, const Density& b) { return integral_product(a, b).real(); };
  auto hp = [](const Density& a, const Density& b) { return half_plane_pairing(a, b).real(); };

  InteractionComponents r;
  r.I = hp(du.m_sharp, Psv) - hp(du.p_sharp, Msv);
  r.J4 = ip(Mu, Ev) + ip(Mv, Eu) - 2 * ip(Pu, Pv);
  r.J6_pattern = ip(Mu, Rpv) - ip(Pu, Bpv) + ip(Bmv, Eu) - ip(Rmv, Pu);
  r.J6 = r.J6_pattern + ip(Mv, du.r4_p) + ip(du.b_m, Ev) - ip(Pv, du.b_p) - ip(du.r4_m, Pv);
  r.J8 = ip(du.b_m, Rpv) - ip(du.r4_m, Bpv) + ip(Bmv, du.r4_p) - ip(Rmv, du.b_p);
  r.window = window_term(du.m_sharp, du.flux_m, Psv, tr(dw.flux_p), ka.xi0) -
             window_term(du.p_sharp, du.flux_p, Msv, tr(dw.flux_m), ka.xi0);
  r.K8 = hp(du.r6_m, Psv) + hp(du.m_sharp, R6pv) - hp(du.r6_p, Msv) - hp(du.p_sharp, R6mv);
  return r;
}

InteractionReport interaction_transversal(const Trajectory& tr, const Corrections& ka, const Corrections& kb,
                                          const TrilinearForm* C, double x0, int first, int last, int stride) {
  const int nd = static_cast<int>(tr.dense_states.size());
  if (stride < 1) throw ParameterError("stride must be positive");
  if (first < 0 || last >= nd || last - first < 2 * stride)
    throw DomainError("dense window too short for the requested stencil");
  if (!(ka.space.band == tr.space.band) || !(kb.space.band == tr.space.band))
    throw ParameterError("corrections and trajectory live on different bands");
  if (ka.xi0 != kb.xi0) throw ParameterError("both localizers must share the frame xi0");

  InteractionReport rep;
  rep.a = ka.a;
  rep.b = kb.a;
  rep.xi0 = ka.xi0;
  rep.x0 = x0;
  rep.stencil = stride * tr.dt;
  rep.warnings = ka.warnings;
  rep.warnings.insert(rep.warnings.end(), kb.warnings.begin(), kb.warnings.end());

  std::vector<double> I(last - first + 1);
  std::vector<InteractionComponents> full(last - first + 1);
  std::vector<bool> have(last - first + 1, false);
  for (int i = first; i <= last; ++i) {
    const bool center = i - stride >= first && i + stride <= last;
    if (center) {
      full[i - first] = interaction_components(tr.dense_states[i], ka, kb, C, x0);
      have[i - first] = true;
      I[i - first] = full[i - first].I;
    } else {
      // Only I is needed at the stencil ends.
      const DensitySet du = densities(tr.dense_states[i], ka, nullptr);
      const DensitySet dw = (&ka == &kb) ? du : densities(tr.dense_states[i], kb, nullptr);
      I[i - first] = half_plane_pairing(du.m_sharp, dw.p_sharp.translated(x0)).real() -
                     half_plane_pairing(du.p_sharp, dw.m_sharp.translated(x0)).real();
    }
  }
  double scale = 0;
  double j4min = std::numeric_limits<double>::infinity();
  for (int i = first + stride; i <= last - stride; ++i) {
    const auto& c = full[i - first];
    const double d = (I[i + stride - first] - I[i - stride - first]) / (2 * stride * tr.dt);
    rep.t.push_back(tr.dense_times[i]);
    rep.I.push_back(c.I);
    rep.J4.push_back(c.J4);
    rep.J6.push_back(c.J6);
    rep.J8.push_back(c.J8);
    rep.K8.push_back(c.K8);
    rep.window.push_back(c.window);
    rep.dIdt.push_back(d);
    rep.residual.push_back(d - (c.J4 + c.J6 + c.J8 + c.K8 + c.window));
    scale = std::max({scale, std::abs(d), std::abs(c.J4) + std::abs(c.J6) + std::abs(c.J8) + std::abs(c.K8)});
    j4min = std::min(j4min, c.J4);
  }
  rep.scale = scale;
  for (double r : rep.residual) rep.residual_max = std::max(rep.residual_max, std::abs(r));
  rep.j4_min = scale > 0 ? j4min / scale : j4min;
  return rep;
}

InteractionReport interaction_diagonal(const Trajectory& tr, const Corrections& ka, const TrilinearForm* C,
                                       double x0, int first, int last, int stride) {
  return interaction_transversal(tr, ka, ka, C, x0, first, last, stride);
}

double j4_positivity(const CVec& u, const CVec& v, const Localizer& a, const BandSpace& s) {
  const int n = s.n();
  CVec au(n), av(n);
  for (int i = 0; i < n; ++i) {
    au[i] = a.a0(s.xi(i)) * u[i];
    av[i] = a.a0(s.xi(i)) * v[i];
  }
  const Density w = bilinear_density([](double, double) { return 1.0; }, s, au, av).derivative();
  const double l2 = w.l2();
  return 4 * l2 * l2;
}

double j4_positivity(const Field& u, const Field& v, const Localizer& a) {
  const GridSpec& g = u.grid;
  const CVec su = u.spectrum(), sv = v.spectrum();
  const int N = g.num_points;
  CVec pu(N), pv(N);
  for (int j = 0; j < N; ++j) {
    const double w = a.a0(g.mode(j) * g.dk());
    pu[j] = w * su[j];
    pv[j] = w * sv[j];
  }
  const Field fu = Field::from_spectrum(g, pu), fv = Field::from_spectrum(g, pv);
  Field prod = Field::zeros(g);
  for (int j = 0; j < N; ++j) prod.samples[j] = fu.samples[j] * std::conj(fv.samples[j]);
  CVec ps = prod.spectrum();
  for (int j = 0; j < N; ++j) ps[j] *= cplx(0, g.mode(j) * g.dk());
  double s = 0;
  for (const auto& c : ps) s += std::norm(c);
  return 4 * g.circumference * s;
}

double j4_symbol_side(const CVec& u, const CVec& v, const Localizer& a, double xi0, const BandSpace& s) {
  const Density Mu = quadratic_density(a, xi0, 0, s, u, u), Mv = quadratic_density(a, xi0, 0, s, v, v);
  const Density Pu = quadratic_density(a, xi0, 1, s, u, u), Pv = quadratic_density(a, xi0, 1, s, v, v);
  const Density Eu = quadratic_density(a, xi0, 2, s, u, u), Ev = quadratic_density(a, xi0, 2, s, v, v);
  return (integral_product(Mu, Ev) + integral_product(Mv, Eu) - 2.0 * integral_product(Pu, Pv)).real();
}

cplx diagonal_trace(const TrilinearSymbol& c, const Localizer& a, double xi0, double xi,
                    const ResonanceThresholds& th) {
  const LocalizedDivision dm = localized_division(c, a, xi0, DensityKind::Mass, th);
  const LocalizedDivision dp = localized_division(c, a, xi0, DensityKind::Momentum, th);
  const Quad q{xi, xi, xi, xi};
  cplx bm = 0, rm = 0, bp = 0, rp = 0;
  if (!dm.is_zero()) dm.evaluate(q, bm, rm);
  if (!dp.is_zero()) dp.evaluate(q, bp, rp);
  const double a2 = a.a(xi, xi);
  const double m = a2, p = (2 * xi0 - 2 * xi) * a2, e = (2 * xi - 2 * xi0) * (2 * xi - 2 * xi0) * a2;
  return m * rp - p * bp + bm * e - rm * p;
}

double diagonal_trace_check(const TrilinearSymbol& c, const Localizer& a, double xi0, int samples,
                            const ResonanceThresholds& th) {
  const double lo = a.identity ? -4.0 : a.support_lo();
  const double hi = a.identity ? 4.0 : a.support_hi();
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const double xi = lo + (hi - lo) * (i + 0.5) / samples;
    const double a0 = a.a0(xi);
    const cplx want = a0 * a0 * a0 * a0 * c(xi, xi, xi);
    worst = std::max(worst, std::abs(diagonal_trace(c, a, xi0, xi, th) - want));
  }
  return worst;
}

BilinearReading transversal_bilinear_reading(const Trajectory& tr, const Localizer& a, const Localizer& b,
                                             double separation) {
  const BandSpace& s = tr.space;
  BilinearReading out;
  const std::size_t n = tr.states.size();
  if (n < 2) throw DomainError("need at least two snapshots");
  std::vector<double> j4(n), bi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CVec& u = tr.states[i];
    const Density Ma = quadratic_density(a, 0, 0, s, u, u), Mb = quadratic_density(b, 0, 0, s, u, u);
    const Density Pa = quadratic_density(a, 0, 1, s, u, u), Pb = quadratic_density(b, 0, 1, s, u, u);
    const Density Ea = quadratic_density(a, 0, 2, s, u, u), Eb = quadratic_density(b, 0, 2, s, u, u);
    j4[i] = (integral_product(Ma, Eb) + integral_product(Mb, Ea) - 2.0 * integral_product(Pa, Pb)).real();
    const Density w = bilinear_density([&](double x, double y) { return a.a0(x) * b.a0(y); }, s, u, u);
    bi[i] = w.l2() * w.l2();
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = tr.times[i + 1] - tr.times[i];
    out.j4_integral += 0.5 * h * (j4[i] + j4[i + 1]);
    out.bilinear_integral += 0.5 * h * (bi[i] + bi[i + 1]);
  }
  out.bilinear_integral *= separation * separation;
  out.ratio = out.bilinear_integral > 0 ? out.j4_integral / out.bilinear_integral : 0;
  return out;
}

void write_interaction_csv(std::ostream& os, const InteractionReport& r) {
  os << "t,I,dIdt,J4,J6,J8,K8,window,residual\n";
  os << std::setprecision(12);
  for (std::size_t i = 0; i < r.t.size(); ++i)
    os << r.t[i] << ',' << r.I[i] << ',' << r.dIdt[i] << ',' << r.J4[i] << ',' << r.J6[i] << ',' << r.J8[i]
       << ',' << r.K8[i] << ',' << r.window[i] << ',' << r.residual[i] << '\n';
}

std::string interaction_summary_json(const InteractionReport& r) {
  std::ostringstream os;
  os << std::setprecision(12) << "{\"xi0\":" << r.xi0 << ",\"x0\":" << r.x0 << ",\"stencil\":" << r.stencil
     << ",\"residual_max\":" << r.residual_max << ",\"scale\":" << r.scale << ",\"j4_min\":" << r.j4_min
     << ",\"samples\":" << r.t.size() << "}";
  return os.str();
}

}  // namespace nlslab
