#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlslab/conservation.hpp"

namespace nlslab {

// Double integral over -L/2 < y < x < L/2 of F(x) G(y), in closed form from
// the coefficients. Throws GuardError when either density exceeds
// guard_tol * sup outside |x| < L/4.
cplx half_plane_pairing(const Density& F, const Density& G, double guard_tol = 1e-2);

struct InteractionComponents {
  double I = 0;
  double J4 = 0, J6 = 0, J8 = 0, K8 = 0;
  double J6_pattern = 0;  // the u^2 v^4 half of J6
  // Contribution of the cut at x = +-L/2 on the torus; vanishes on the line.
  double window = 0;
};

// I(u, v) and the right-hand side of its time derivative, with v = u(. + x0).
// ka localizes u (mass side), kb localizes v.
InteractionComponents interaction_components(const CVec& u, const Corrections& ka, const Corrections& kb,
                                             const TrilinearForm* C, double x0);

struct InteractionReport {
  Localizer a, b;
  double xi0 = 0, x0 = 0;
  double stencil = 0;  // differencing step of dI/dt
  std::vector<double> t, I, J4, J6, J8, K8, window, dIdt, residual;
  double residual_max = 0;
  double scale = 0;   // max |dI/dt|
  double j4_min = 0;  // min J4 / scale
  std::vector<std::string> warnings;
};

// Evaluates the components on dense steps [first, last] of the trajectory
// and differences I with step stride*dt (second order central).
InteractionReport interaction_transversal(const Trajectory& tr, const Corrections& ka, const Corrections& kb,
                                          const TrilinearForm* C, double x0, int first, int last, int stride = 1);
InteractionReport interaction_diagonal(const Trajectory& tr, const Corrections& ka, const TrilinearForm* C,
                                       double x0, int first, int last, int stride = 1);

// 4 int |d/dx (A0 u conj(B0 v))|^2 dx.
double j4_positivity(const CVec& u, const CVec& v, const Localizer& a, const BandSpace& s);
double j4_positivity(const Field& u, const Field& v, const Localizer& a);
// The quadratic-density assembly of the same quantity.
double j4_symbol_side(const CVec& u, const CVec& v, const Localizer& a, double xi0, const BandSpace& s);

// max over samples in the localizer support of |j6(xi) - a0(xi)^4 c(xi,xi,xi)|.
double diagonal_trace_check(const TrilinearSymbol& c, const Localizer& a, double xi0, int samples = 41,
                            const ResonanceThresholds& th = {});
cplx diagonal_trace(const TrilinearSymbol& c, const Localizer& a, double xi0, double xi,
                    const ResonanceThresholds& th = {});

// int J4_AB dt and sep^2 int |A0u conj(B0u)|^2 dt over the snapshots.
struct BilinearReading {
  double j4_integral = 0;
  double bilinear_integral = 0;
  double ratio = 0;
};
BilinearReading transversal_bilinear_reading(const Trajectory& tr, const Localizer& a, const Localizer& b,
                                             double separation);

void write_interaction_csv(std::ostream& os, const InteractionReport& r);
std::string interaction_summary_json(const InteractionReport& r);

}  // namespace nlslab
