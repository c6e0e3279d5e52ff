#include "nlslab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Samples of e^{-i lo dk y} u(y) at y_j = j L / M.
CVec relative_samples(const CVec& u, int M) {
  CVec c(M);
  std::copy(u.begin(), u.end(), c.begin());
  return fft::inverse(c);
}

int signed_mode(int j, int M) { return j < M / 2 ? j : j - M; }

double japan(double x) { return std::sqrt(1 + x * x); }

template <class F>
double trapezoid(const std::vector<double>& t, F f) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) s += 0.5 * (t[i + 1] - t[i]) * (f(i) + f(i + 1));
  return s;
}

void check_cadence(const std::vector<double>& t) {
  if (t.size() < 2) throw DomainError("need at least two snapshots for time quadrature");
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i + 1] - t[i] > 0.1 + 1e-12) throw ParameterError("snapshot cadence exceeds 0.1");
}

CVec translate_coeffs(const CVec& v, const BandSpace& s, double x0) {
  CVec w(v.size());
  for (int i = 0; i < s.n(); ++i) w[i] = v[i] * std::polar(1.0, s.xi(i) * x0);
  return w;
}

}  // namespace

double sobolev_weight(double xi, double s) { return std::pow(1 + xi * xi, s / 2); }

double lp_norm_pow(const CVec& u, const BandSpace& s, int p) {
  const int M = std::max(8, fft::next_pow2(static_cast<long>(p) * s.n() + 1));
  const CVec v = relative_samples(u, M);
  double acc = 0;
  for (const auto& z : v) acc += std::pow(std::abs(z), p);
  return acc * s.grid.circumference / M;
}

double product_l2_sq(const CVec& u, const CVec& v, const BandSpace& s, double x0, bool derivative,
                     double sobolev) {
  const int M = std::max(8, fft::next_pow2(2 * s.n()));
  const CVec a = relative_samples(u, M);
  const CVec b = relative_samples(x0 == 0 ? v : translate_coeffs(v, s, x0), M);
  CVec p(M);
  for (int j = 0; j < M; ++j) p[j] = a[j] * std::conj(b[j]);
  const CVec ph = fft::forward(p);
  const double dk = s.grid.dk();
  double acc = 0;
  for (int j = 0; j < M; ++j) {
    const double xi = signed_mode(j, M) * dk;
    double w = derivative ? xi * xi : 1.0;
    if (sobolev != 0) w *= std::pow(sobolev_weight(xi, sobolev), 2);
    acc += w * std::norm(ph[j]);
  }
  return s.grid.circumference * acc / (double(M) * M);
}

bool NormReport::finite() const {
  auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isnan(x) || std::isfinite(x); });
  };
  for (const auto& b : bilinear)
    if (!std::isnan(b.ratio) && !std::isfinite(b.ratio)) return false;
  return ok(ratio_ee) && ok(ratio_se) && std::isfinite(fit_ee) && std::isfinite(fit_se) &&
         std::isfinite(fit_bi) && std::isfinite(fit_ab);
}

double x_norm_window(const std::vector<double>& times, const std::vector<CVec>& states, const BandSpace& s,
                     int k, const SpatialPartition& tubes) {
  const double L = s.grid.circumference;
  const int M = std::max(fft::next_pow2(2 * s.n()), fft::next_pow2(static_cast<long>(8 * L)));
  const double dy = L / M;
  const double h = tubes.spacing();
  std::vector<double> best(tubes.cells, 0.0), cur(tubes.cells);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const CVec uk = project_band(states[i], s.band, s.grid.dk(), k);
    const CVec v = relative_samples(uk, M);
    std::fill(cur.begin(), cur.end(), 0.0);
    const double shift = 2 * times[i] * k;
    for (int j = 0; j < M; ++j) {
      const double w = std::norm(v[j]);
      if (w == 0) continue;
      // x = y_j - L/2 on the centered torus, tube coordinate x - 2tk.
      double z = j * dy - L / 2 - shift;
      z -= L * std::floor((z + L / 2) / L);
      const int c0 = static_cast<int>(std::floor((z + L / 2) / h));
      for (int c = c0 - 1; c <= c0 + 2; ++c) {
        const int cell = ((c % tubes.cells) + tubes.cells) % tubes.cells;
        const double chi = tubes.chi(cell, z);
        if (chi != 0) cur[cell] += chi * chi * w * dy;
      }
    }
    for (int c = 0; c < tubes.cells; ++c) best[c] = std::max(best[c], cur[c]);
  }
  double sum = 0;
  for (double b : best) sum += b;
  return std::sqrt(sum);
}

double x_norm(const Trajectory& tr, const std::vector<int>& bins, const SpatialPartition& tubes,
              std::vector<double>* xk) {
  const auto& t = tr.times;
  if (t.empty() || t.back() - t.front() < 1.0 - 1e-9) throw DomainError("window too short: need a unit time window");
  std::vector<double> per(bins.size(), 0.0);
  double best = 0;
  for (double w0 = t.front(); w0 + 1.0 <= t.back() + 1e-9; w0 += 1.0) {
    std::vector<double> tw;
    std::vector<CVec> sw;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] >= w0 - 1e-9 && t[i] <= w0 + 1.0 + 1e-9) {
        tw.push_back(t[i]);
        sw.push_back(tr.states[i]);
      }
    double total = 0;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      const double x = x_norm_window(tw, sw, tr.space, bins[b], tubes);
      per[b] = std::max(per[b], x);
      total += x * x;
    }
    best = std::max(best, std::sqrt(total));
  }
  if (xk) *xk = per;
  return best;
}

NormReport norms(const Trajectory& tr, const std::vector<int>& bins, const Envelope& env, double eps,
                 const std::vector<double>& x0_list) {
  check_cadence(tr.times);
  const BandSpace& s = tr.space;
  const std::size_t nt = tr.times.size(), nb = bins.size();
  NormReport r;
  r.eps = eps;
  r.bins = bins;

  // Per-bin projections of every snapshot.
  std::vector<std::vector<CVec>> uk(nb, std::vector<CVec>(nt));
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t i = 0; i < nt; ++i) uk[b][i] = project_band(tr.states[i], s.band, s.grid.dk(), bins[b]);

  const double L = s.grid.circumference;
  for (std::size_t b = 0; b < nb; ++b) {
    double linf = 0;
    std::vector<double> l6(nt);
    for (std::size_t i = 0; i < nt; ++i) {
      double m = 0;
      for (const auto& z : uk[b][i]) m += std::norm(z);
      linf = std::max(linf, std::sqrt(L * m));
      l6[i] = lp_norm_pow(uk[b][i], s, 6);
    }
    r.linf_l2.push_back(linf);
    r.l6.push_back(std::pow(trapezoid(tr.times, [&](std::size_t i) { return l6[i]; }), 1.0 / 6));
    const double c = (std::abs(bins[b]) <= env.k_max) ? env.at(bins[b]) : 0.0;
    r.envelope.push_back(c);
    if (c <= kEnvelopeFloor) {
      r.degenerate_bins.push_back(bins[b]);
      r.ratio_ee.push_back(kNaN);
      r.ratio_se.push_back(kNaN);
    } else {
      r.ratio_ee.push_back(linf / (eps * c));
      r.ratio_se.push_back(r.l6.back() / std::pow(eps * c, 2.0 / 3));
      r.fit_ee = std::max(r.fit_ee, r.ratio_ee.back());
      r.fit_se = std::max(r.fit_se, r.ratio_se.back());
    }
  }

  if (tr.times.back() - tr.times.front() >= 1.0 - 1e-9)
    r.x_norm = x_norm(tr, bins, SpatialPartition::unit(L), &r.x_k);

  for (std::size_t b1 = 0; b1 < nb; ++b1)
    for (std::size_t b2 = 0; b2 < nb; ++b2)
      for (double x0 : x0_list) {
        BilinearEntry e;
        e.k1 = bins[b1];
        e.k2 = bins[b2];
        e.x0 = x0;
        std::vector<double> d(nt), p(nt);
        for (std::size_t i = 0; i < nt; ++i) {
          d[i] = product_l2_sq(uk[b1][i], uk[b2][i], s, x0, true);
          p[i] = product_l2_sq(uk[b1][i], uk[b2][i], s, x0, false);
        }
        e.value = std::sqrt(trapezoid(tr.times, [&](std::size_t i) { return d[i]; }));
        e.plain = std::sqrt(trapezoid(tr.times, [&](std::size_t i) { return p[i]; }));
        const double c1 = r.envelope[b1], c2 = r.envelope[b2];
        if (c1 <= kEnvelopeFloor || c2 <= kEnvelopeFloor) {
          e.ratio = kNaN;
        } else {
          e.ratio = e.value / (eps * eps * c1 * c2 * std::sqrt(japan(e.k1 - e.k2)));
          if (e.k1 == e.k2)
            r.fit_bi = std::max(r.fit_bi, e.ratio);
          else
            r.fit_ab = std::max(r.fit_ab, e.ratio);
        }
        if (e.k1 != e.k2 && !r.x_k.empty() && r.x_k[b1] > 0 && r.x_k[b2] > 0)
          r.fit_separate =
              std::max(r.fit_separate, e.plain * std::sqrt(japan(e.k1 - e.k2)) / (r.x_k[b1] * r.x_k[b2]));
        r.bilinear.push_back(e);
      }
  return r;
}

GlobalBounds global_bounds(const Trajectory& tr, double eps, const std::vector<double>& x0_list) {
  check_cadence(tr.times);
  const BandSpace& s = tr.space;
  const std::size_t nt = tr.times.size();
  GlobalBounds g;
  g.eps = eps;
  g.x0_list = x0_list;
  std::vector<double> l6(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    double m = 0;
    for (const auto& z : tr.states[i]) m += std::norm(z);
    g.linf_l2 = std::max(g.linf_l2, std::sqrt(s.grid.circumference * m));
    l6[i] = lp_norm_pow(tr.states[i], s, 6);
  }
  g.l6 = std::pow(trapezoid(tr.times, [&](std::size_t i) { return l6[i]; }), 1.0 / 6);
  double worst = 0;
  for (double x0 : x0_list) {
    std::vector<double> d(nt);
    for (std::size_t i = 0; i < nt; ++i) d[i] = product_l2_sq(tr.states[i], tr.states[i], s, x0, true, -0.5);
    g.bilinear.push_back(std::sqrt(trapezoid(tr.times, [&](std::size_t i) { return d[i]; })));
    worst = std::max(worst, g.bilinear.back());
  }
  if (eps > 0) {
    g.ratio_l2 = g.linf_l2 / eps;
    g.ratio_l6 = g.l6 / std::pow(eps, 2.0 / 3);
    g.ratio_bi = worst / (eps * eps);
  }
  return g;
}

SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double floor) {
  SlopeFit f;
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw ParameterError("regression needs at least three points");
  for (double v : y)
    if (!(v > floor)) f.degenerate = true;
  if (f.degenerate) return f;
  std::vector<double> lx(n), ly(n);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 0) {
    f.degenerate = true;
    return f;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - f.intercept - f.slope * lx[i];
    sse += e * e;
  }
  f.r2 = syy > 0 ? 1 - sse / syy : 1.0;
  // Student t quantiles (two sided 95%) for n - 2 degrees of freedom.
  static const double tq[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228};
  const std::size_t dof = n - 2;
  const double t = dof <= 10 ? tq[dof - 1] : 1.96;
  f.ci95 = t * std::sqrt(sse / dof / sxx);
  return f;
}

ScalingReport scaling_study(const TrilinearSymbol& c, const DataFamily& data, const std::vector<double>& eps_ladder,
                            const ScalingConfig& cfg) {
  if (eps_ladder.size() < 3) throw ParameterError("scaling study needs at least three eps values");
  const Band band = cfg.band.size() > 0 ? cfg.band : default_band(cfg.grid);
  const BandSpace s{cfg.grid, band};
  const Corrections k = build_corrections(c, cfg.a, cfg.xi0, s);
  const TrilinearForm C(c, s);
  const QuarticTensor c4 = tabulate_quartic(k.mass.c4, s);

  ScalingReport r;
  double mass_scale = 0;
  for (double eps : eps_ladder) {
    const Field u0 = data(eps);
    SolverConfig sc;
    sc.dt = cfg.dt;
    sc.horizon = cfg.t_star + 3 * cfg.dt;
    sc.snapshot_every = cfg.t_star;
    sc.dense = true;
    sc.dense_from = cfg.t_star - 3 * cfg.dt;
    sc.band = band;
    const Trajectory tr = simulate(band_coeffs(u0, band), C, sc);
    if (tr.aborted) throw EvaluationError("scaling run aborted: " + tr.abort_reason);
    const int i = tr.dense_index(cfg.t_star);
    if (i < 2 || i + 2 >= static_cast<int>(tr.dense_states.size()))
      throw DomainError("dense window does not cover t_star");
    const double h = tr.dt;
    double raw[5], mod[5];
    for (int j = -2; j <= 2; ++j) {
      const CVec& u = tr.dense_states[i + j];
      const Density m = quadratic_density(cfg.a, 0.0, 0, s, u, u);
      raw[j + 2] = m.integral().real();
      mod[j + 2] = raw[j + 2] + quartic_density(k.b_m, s, u, u, u, u).integral().real();
    }
    auto fd = [&](const double* f) { return (-f[4] + 8 * f[3] - 8 * f[1] + f[0]) / (12 * h); };
    const CVec& u = tr.dense_states[i];
    mass_scale = std::max(mass_scale, std::abs(raw[2]));
    r.eps.push_back(eps);
    r.raw_drift.push_back(std::abs(fd(raw)));
    r.modified_drift.push_back(std::abs(fd(mod)));
    r.raw_formula.push_back(std::abs(quartic_functional(c4, s, u, u, u, u)));
    r.modified_formula.push_back(std::abs(sextic_remainder(DensityKind::Mass, k, C, u).integral()));
  }
  const double floor = cfg.floor * std::max(1.0, mass_scale);
  r.raw = loglog_fit(r.eps, r.raw_formula, floor);
  r.modified = loglog_fit(r.eps, r.modified_formula, floor);
  return r;
}

void write_norms_csv(std::ostream& per_bin, std::ostream& pairwise, const NormReport& r) {
  per_bin << std::setprecision(12) << "k,c_k,linf_l2,l6,x_k,ratio_ee,ratio_se\n";
  for (std::size_t b = 0; b < r.bins.size(); ++b)
    per_bin << r.bins[b] << ',' << r.envelope[b] << ',' << r.linf_l2[b] << ',' << r.l6[b] << ','
            << (b < r.x_k.size() ? r.x_k[b] : 0.0) << ',' << r.ratio_ee[b] << ',' << r.ratio_se[b] << '\n';
  pairwise << std::setprecision(12) << "k1,k2,x0,bilinear,product,ratio\n";
  for (const auto& e : r.bilinear)
    pairwise << e.k1 << ',' << e.k2 << ',' << e.x0 << ',' << e.value << ',' << e.plain << ',' << e.ratio << '\n';
}

std::string norms_summary_json(const NormReport& r, const GlobalBounds& g) {
  std::ostringstream os;
  os << std::setprecision(12);
  auto num = [&](double v) -> std::ostream& {
    if (std::isfinite(v))
      os << v;
    else
      os << "null";
    return os;
  };
  os << "{\"eps\":";
  num(r.eps) << ",\"bin_mass_ratio\":";
  num(r.fit_ee) << ",\"bin_l6_ratio\":";
  num(r.fit_se) << ",\"bin_bilinear_ratio\":";
  num(r.fit_bi) << ",\"pair_bilinear_ratio\":";
  num(r.fit_ab) << ",\"separated_bilinear_constant\":";
  num(r.fit_separate) << ",\"global_l2_ratio\":";
  num(g.ratio_l2) << ",\"global_l6_ratio\":";
  num(g.ratio_l6) << ",\"global_bilinear_ratio\":";
  num(g.ratio_bi) << ",\"x_norm\":";
  num(r.x_norm) << ",\"degenerate_bins\":[";
  for (std::size_t i = 0; i < r.degenerate_bins.size(); ++i) os << (i ? "," : "") << r.degenerate_bins[i];
  os << "]}";
  return os.str();
}

void write_scaling_csv(std::ostream& os, const ScalingReport& r) {
  os << std::setprecision(12) << "quantity,slope,ci95,r2,degenerate\n";
  os << "raw_mass," << r.raw.slope << ',' << r.raw.ci95 << ',' << r.raw.r2 << ',' << r.raw.degenerate << '\n';
  os << "modified_mass," << r.modified.slope << ',' << r.modified.ci95 << ',' << r.modified.r2 << ','
     << r.modified.degenerate << '\n';
}

}  // namespace nlslab
