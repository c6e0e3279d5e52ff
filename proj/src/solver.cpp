#include "nlslab/solver.hpp"

#include <cmath>
#include <sstream>

namespace nlslab {

Band default_band(const GridSpec& g) { return band_for(g, -(g.k_max + 1.0), g.k_max + 1.0); }

int Trajectory::dense_index(double t) const {
  if (dense_times.empty()) return -1;
  const double pos = (t - dense_times.front()) / dt;
  const long i = std::lround(pos);
  if (i < 0 || i >= static_cast<long>(dense_times.size()) || std::abs(pos - i) > 1e-6) return -1;
  return static_cast<int>(i);
}

Field linear_propagate(const Field& u0, double t) {
  const GridSpec& g = u0.grid;
  CVec spec = u0.spectrum();
  for (int j = 0; j < g.num_points; ++j) {
    const double xi = g.mode(j) * g.dk();
    spec[j] *= std::polar(1.0, -xi * xi * t);
  }
  return Field::from_spectrum(g, spec);
}

CVec linear_propagate(const CVec& coeffs, const BandSpace& space, double t) {
  CVec out(coeffs);
  for (int i = 0; i < space.n(); ++i) out[i] *= std::polar(1.0, -space.xi(i) * space.xi(i) * t);
  return out;
}

void check_guards(const BandSpace& space, const SolverConfig& cfg) {
  const GridSpec& g = space.grid;
  const double xmax = std::max(std::abs(space.xi(0)), std::abs(space.xi(space.n() - 1)));
  std::ostringstream err;
  if (cfg.dt * xmax * xmax > 0.5 + 1e-12)
    err << "dt * max|xi|^2 = " << cfg.dt * xmax * xmax << " exceeds 0.5 (reduce dt below "
        << 0.5 / (xmax * xmax) << ")";
  else if (2 * xmax * cfg.horizon >= g.circumference / 4)
    err << "group speed " << 2 * xmax << " times horizon " << cfg.horizon << " reaches circumference/4 = "
        << g.circumference / 4 << " (shrink horizon or enlarge circumference)";
  else if (std::max(std::abs(space.band.lo), std::abs(space.band.hi)) >= g.num_points / 4)
    err << "band reaches beyond Nyquist/2 (raise num_points)";
  if (!err.str().empty()) throw GuardError(err.str());
}

Trajectory simulate(const Field& u0, const TrilinearSymbol& c, const SolverConfig& cfg) {
  const Band band = cfg.band.size() > 0 ? cfg.band : default_band(u0.grid);
  const BandSpace space{u0.grid, band};
  const TrilinearForm form(c, space, cfg.trilinear);
  const CVec coeffs = band_coeffs(u0, band);
  Trajectory tr = simulate(coeffs, form, cfg);
  double kept = 0;
  for (const auto& v : coeffs) kept += std::norm(v);
  const double total = u0.norm();
  const double lost = total > 0 ? std::abs(total * total - u0.grid.circumference * kept) / (total * total) : 0;
  if (lost > 1e-12) {
    std::ostringstream os;
    os << "initial data carries relative mass " << lost << " outside the dynamics band";
    tr.warnings.push_back(os.str());
  }
  for (const auto& w : form.warnings()) tr.warnings.push_back(w);
  return tr;
}

Trajectory simulate(const CVec& u0, const TrilinearForm& form, const SolverConfig& cfg) {
  const BandSpace& space = form.space();
  if (!(cfg.dt > 0) || !(cfg.horizon > 0)) throw ParameterError("dt and horizon must be positive");
  if (cfg.enforce_guards) check_guards(space, cfg);
  const long steps = std::lround(cfg.horizon / cfg.dt);
  if (std::abs(steps * cfg.dt - cfg.horizon) > 1e-9 * cfg.horizon)
    throw ParameterError("horizon must be a multiple of dt");
  const long every = std::lround(cfg.snapshot_every / cfg.dt);
  if (every < 1 || std::abs(every * cfg.dt - cfg.snapshot_every) > 1e-9 * cfg.snapshot_every)
    throw ParameterError("snapshot cadence must be a multiple of dt");

  Trajectory tr;
  tr.space = space;
  tr.dt = cfg.dt;
  double mass = 0;
  for (const auto& v : u0) mass += std::norm(v);
  tr.eps = std::sqrt(space.grid.circumference * mass);
  if (tr.eps > 0 && cfg.horizon > 1.0 / (tr.eps * tr.eps)) {
    std::ostringstream os;
    os << "horizon " << cfg.horizon << " exceeds eps^-2 = " << 1.0 / (tr.eps * tr.eps)
       << "; beyond the guaranteed local lifespan";
    tr.warnings.push_back(os.str());
  }

  const int n = space.n();
  const double h = cfg.dt;
  CVec Eh(n), Ef(n);
  for (int i = 0; i < n; ++i) {
    const double w = space.xi(i) * space.xi(i);
    Eh[i] = std::polar(1.0, -w * h / 2);
    Ef[i] = std::polar(1.0, -w * h);
  }
  auto N = [&](const CVec& v) {
    CVec out = form.apply(v);
    for (auto& x : out) x *= -kI;
    return out;
  };
  auto in_dense = [&](double t) {
    return cfg.dense && t >= cfg.dense_from - 1e-9 * h && t <= cfg.dense_to + 1e-9 * h;
  };

  CVec u = u0, a(n), b(n), c(n);
  tr.times.push_back(0.0);
  tr.states.push_back(u);
  if (in_dense(0.0)) {
    tr.dense_times.push_back(0.0);
    tr.dense_states.push_back(u);
  }
  for (long s = 1; s <= steps; ++s) {
    const CVec k1 = N(u);
    for (int i = 0; i < n; ++i) a[i] = Eh[i] * (u[i] + 0.5 * h * k1[i]);
    const CVec k2 = N(a);
    for (int i = 0; i < n; ++i) b[i] = Eh[i] * u[i] + 0.5 * h * k2[i];
    const CVec k3 = N(b);
    for (int i = 0; i < n; ++i) c[i] = Ef[i] * u[i] + h * Eh[i] * k3[i];
    const CVec k4 = N(c);
    bool finite = true;
    for (int i = 0; i < n; ++i) {
      u[i] = Ef[i] * u[i] + h / 6 * (Ef[i] * k1[i] + 2.0 * Eh[i] * (k2[i] + k3[i]) + k4[i]);
      finite = finite && std::isfinite(u[i].real()) && std::isfinite(u[i].imag());
    }
    const double t = s * h;
    if (!finite) {
      tr.aborted = true;
      std::ostringstream os;
      os << "non-finite state at t = " << t << "; last good snapshot kept";
      tr.abort_reason = os.str();
      break;
    }
    if (s % every == 0) {
      tr.times.push_back(t);
      tr.states.push_back(u);
    }
    if (in_dense(t)) {
      tr.dense_times.push_back(t);
      tr.dense_states.push_back(u);
    }
  }
  return tr;
}

ConvergenceReport convergence_test(const Field& u0, const TrilinearSymbol& c, const SolverConfig& cfg) {
  ConvergenceReport rep;
  auto final_state = [&](const Field& init, double dt) {
    SolverConfig k = cfg;
    k.dt = dt;
    k.snapshot_every = cfg.horizon;
    k.dense = false;
    const Trajectory tr = simulate(init, c, k);
    return tr.field(tr.states.size() - 1);
  };
  auto diff = [](const Field& x, const Field& y) {
    Field d = x;
    for (std::size_t i = 0; i < d.samples.size(); ++i) d.samples[i] -= y.samples[i];
    return d.norm();
  };
  const Field u1 = final_state(u0, cfg.dt);
  const Field u2 = final_state(u0, cfg.dt / 2);
  const Field u4 = final_state(u0, cfg.dt / 4);
  rep.error_dt = diff(u1, u2);
  rep.error_dt2 = diff(u2, u4);
  rep.temporal_order = (rep.error_dt > 0 && rep.error_dt2 > 0) ? std::log2(rep.error_dt / rep.error_dt2) : 0;

  // Doubling N on the same band leaves the Galerkin dynamics unchanged; the
  // difference measures transform round-off.
  GridSpec g2 = u0.grid;
  g2.num_points *= 2;
  const CVec spec = u0.spectrum();
  CVec spec2(g2.num_points);
  for (int j = 0; j < u0.grid.num_points; ++j) {
    const int m = u0.grid.mode(j);
    if (std::abs(m) < u0.grid.num_points / 2) spec2[g2.slot(m)] = spec[j];
  }
  const Field v0 = Field::from_spectrum(g2, spec2);
  const Field v2 = final_state(v0, cfg.dt / 2);
  CVec s1 = u2.spectrum(), s2 = v2.spectrum();
  double d = 0;
  for (int j = 0; j < u0.grid.num_points; ++j) d += std::norm(s1[j] - s2[g2.slot(u0.grid.mode(j))]);
  rep.spatial_difference = std::sqrt(u0.grid.circumference * d);

  const Band band = cfg.band.size() > 0 ? cfg.band : default_band(u0.grid);
  const CVec bc = band_coeffs(u2, band);
  double peak = 0;
  for (const auto& v : bc) peak = std::max(peak, std::abs(v));
  const int edge = std::max(1, band.size() / 20);
  double tail = 0;
  for (int i = 0; i < edge; ++i)
    tail = std::max({tail, std::abs(bc[i]), std::abs(bc[band.size() - 1 - i])});
  rep.spectral_tail = peak > 0 ? tail / peak : 0;
  rep.order_ok = rep.temporal_order >= 3.5 && rep.temporal_order <= 4.5;
  rep.resolved = rep.spectral_tail < 1e-8;
  rep.degraded = !rep.order_ok || !rep.resolved;
  return rep;
}

}  // namespace nlslab
