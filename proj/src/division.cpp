#include "nlslab/division.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace nlslab {
namespace {

// 4th-order central derivative.
template <class F>
cplx derivative(F&& f, double x, double h) {
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// (f(x) - f(0)) / x, with the removable singularity handled by the midpoint
// derivative for small x.
template <class F>
cplx quotient(F&& f, double x, cplx f0, const ResonanceThresholds& th) {
  if (std::abs(x) > th.quotient_switch) return (f(x) - f0) / x;
  return derivative(f, x / 2, th.stencil_step);
}

}  // namespace

DivisionValue DivisionPair::evaluate(const Quad& xi) const {
  DivisionValue out;
  if (c4_.zero) return out;
  const auto eta = eta_from_xi(xi);
  const double e1 = eta[0], e2 = eta[1], e3 = eta[2], e4 = eta[3];

  // c~(eta) = w1(eta) c4(xi(eta)).
  auto ctilde = [&](double s1, double s2, double s3) -> cplx {
    const double w1 = region_weights(s1, division_scale(s1, s2, s3), th_)[0];
    if (w1 == 0.0) return 0.0;
    return w1 * c4_(xi_from_eta({s1, s2, s3, e4}));
  };

  if (hyperplane_) {
    auto f = [&](double s) { return c4_(xi_from_eta({s, e2, e3, e4})); };
    out.r_tilde = quotient(f, e1, 0.0, th_);
    return out;
  }

  const cplx c4v = c4_(xi);
  const auto w = region_weights(e1, division_scale(e1, e2, e3), th_);

  // Omega1: split off the eta1 dependence, then the eta2, eta3 dependence.
  // chi stops where w1 does, so the transferred b stays out of Omega3.
  const double chi = smooth_step((std::abs(e1) - th_.core) / th_.core);
  if (w[0] > 0 || chi > 0) {
    const cplx ct = w[0] * c4v;
    if (chi == 0.0) {
      out.r_tilde += ct / e1;
    } else {
      const cplx f23 = ctilde(0.0, e2, e3);
      if (std::abs(e1) > th_.quotient_switch) {
        out.r_tilde += (ct - chi * f23) / e1;
      } else {
        out.r_tilde += derivative([&](double s) { return ctilde(s, e2, e3); }, e1 / 2, th_.stencil_step);
      }
      // D(s2) = (f(s2, e3) - f(s2, 0)) / e3, Q23 = (D(e2) - D(0)) / e2.
      auto D = [&](double s2) -> cplx {
        const double zero = 0.0;
        const cplx fs0 = ctilde(zero, s2, 0.0);
        if (std::abs(e3) > th_.quotient_switch) {
          const cplx fs3 = (s2 == e2) ? f23 : ctilde(0.0, s2, e3);
          return (fs3 - fs0) / e3;
        }
        return derivative([&](double s3) { return ctilde(0.0, s2, s3); }, e3 / 2, th_.stencil_step);
      };
      const cplx q23 = quotient(D, e2, D(0.0), th_);
      out.b += -2.0 * chi * q23;
    }
  }
  // Omega2: b = -c4 / tilde Delta.
  if (w[1] > 0) out.b += -w[1] * c4v / (0.5 * e2 * e3);
  // Omega3: r~ = c4 / Delta4xi.
  if (w[2] > 0) out.r_tilde += w[2] * c4v / e1;
  return out;
}

cplx DivisionPair::r4(const Quad& xi, double xi0) const {
  const DivisionValue v = evaluate(xi);
  return v.r_tilde + 2 * ((xi[0] + xi[1] + xi[2] + xi[3]) / 4 - xi0) * v.b;
}

QuarticSymbol DivisionPair::b4() const {
  DivisionPair self = *this;
  return QuarticSymbol{[self](const Quad& x) { return self.evaluate(x).b; }, QuarticTag::CorrectionB, c4_.zero};
}

QuarticSymbol DivisionPair::r4_tilde() const {
  DivisionPair self = *this;
  return QuarticSymbol{[self](const Quad& x) { return self.evaluate(x).r_tilde; }, QuarticTag::FluxR, c4_.zero};
}

QuarticSymbol DivisionPair::r4_symbol(double xi0) const {
  DivisionPair self = *this;
  return QuarticSymbol{[self, xi0](const Quad& x) { return self.r4(x, xi0); }, QuarticTag::FluxR, c4_.zero};
}

ResonantSup resonant_sup(const QuarticSymbol& c4, double box, int n) {
  ResonantSup out;
  if (c4.zero) return out;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-box, box);
  for (int s = 0; s < 100; ++s) out.scale = std::max(out.scale, std::abs(c4({U(rng), U(rng), U(rng), U(rng)})));
  for (int s = 0; s < n; ++s) {
    const double p = U(rng), q = U(rng);
    const Quad pts[2] = {{p, p, q, q}, {p, q, q, p}};
    for (const Quad& x : pts) {
      const double v = std::abs(c4(x));
      if (v > out.value) {
        out.value = v;
        out.at = x;
      }
    }
  }
  return out;
}

void check_resonant_vanishing(const QuarticSymbol& c4, double box, int n, double tol) {
  const ResonantSup r = resonant_sup(c4, box, n);
  if (r.value > tol * r.scale) {
    std::ostringstream os;
    os << "quartic symbol does not vanish on the resonant set: |c4| = " << r.value << " at (" << r.at[0] << ", "
       << r.at[1] << ", " << r.at[2] << ", " << r.at[3] << ")";
    throw DomainError(os.str());
  }
}

bool vanishes_on_hyperplane(const QuarticSymbol& c4, double box, int n, double tol) {
  if (c4.zero) return false;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-box, box);
  double scale = 1.0, worst = 0;
  for (int s = 0; s < n; ++s) {
    scale = std::max(scale, std::abs(c4({U(rng), U(rng), U(rng), U(rng)})));
    worst = std::max(worst, std::abs(c4(xi_from_eta({0.0, U(rng), U(rng), U(rng)}))));
  }
  return worst <= tol * scale;
}

DivisionPair divide(const QuarticSymbol& c4, const ResonanceThresholds& th, bool validate) {
  if (validate) check_resonant_vanishing(c4);
  return DivisionPair(c4, th, vanishes_on_hyperplane(c4));
}

DivisionBounds fit_division_bounds(const DivisionPair& pair, double box, int n, unsigned seed) {
  DivisionBounds out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-box, box);
  for (int s = 0; s < n; ++s) {
    const Quad x{U(rng), U(rng), U(rng), U(rng)};
    const ResonancePoint p = resonance(x, pair.thresholds());
    const DivisionValue v = pair.evaluate(x);
    const cplx c4 = pair.source()(x);
    const cplx rebuilt = p.delta4 * v.r_tilde - p.tilde_delta4_sq * v.b;
    out.max_residual = std::max(out.max_residual, std::abs(c4 - rebuilt) / (1 + std::abs(c4)));
    const double jh = std::sqrt(1 + p.d_hi * p.d_hi), jm = std::sqrt(1 + p.d_med * p.d_med);
    out.k_b = std::max(out.k_b, std::abs(v.b) * jh * jm);
    out.k_r = std::max(out.k_r, std::abs(v.r_tilde) * jm);
  }
  out.samples = n;
  return out;
}

LocalizedDivision localized_division(const TrilinearSymbol& c, const Localizer& a, double xi0,
                                     DensityKind kind, const ResonanceThresholds& th) {
  LocalizedDivision out;
  out.kind = kind;
  out.xi0 = xi0;
  out.a = a;
  out.c = c;
  out.c4 = kind == DensityKind::Mass ? quartic_mass_symbol(c, a) : quartic_momentum_symbol(c, a, xi0);
  if (!a.identity) {
    const double lo = a.support_lo(), hi = a.support_hi();
    const double dist = xi0 < lo ? lo - xi0 : (xi0 > hi ? xi0 - hi : 0.0);
    if (dist > hi - lo) {
      std::ostringstream os;
      os << "xi0 = " << xi0 << " lies " << dist << " away from the localizer support [" << lo << ", " << hi
         << "]; correction sizes degrade with this distance";
      out.warnings.push_back(os.str());
    }
  }
  out.pair = divide(out.c4, th);
  return out;
}

}  // namespace nlslab
