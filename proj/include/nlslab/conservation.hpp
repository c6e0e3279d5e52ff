#pragma once

#include <iosfwd>
#include <vector>

#include "nlslab/division.hpp"
#include "nlslab/forms.hpp"
#include "nlslab/solver.hpp"

namespace nlslab {

// Quartic correction and flux symbols for one (c, a, xi0) on a band, in
// conservation form.
struct Corrections {
  BandSpace space;
  TrilinearSymbol c;
  Localizer a;
  double xi0 = 0;
  LocalizedDivision mass, momentum;
  QuarticTensor b_m, r_m, b_p, r_p;
  std::vector<std::string> warnings;
};

Corrections build_corrections(const TrilinearSymbol& c, const Localizer& a, double xi0, const BandSpace& space,
                              const ResonanceThresholds& th = {});

struct DensitySet {
  Localizer a;
  double xi0 = 0;
  Density mass, momentum, energy;        // M_a, P_a, E_a
  Density momentum_xi0, energy_xi0;      // P_{a,xi0}, E_{a,xi0}
  Density b_m, b_p;                      // B4_{m,a}, B4_{p,a,xi0}
  Density r4_m, r4_p;                    // R4_{m,a,xi0}, R4_{p,a,xi0}
  Density r6_m, r6_p;                    // sextic remainders
  Density m_sharp, p_sharp;              // M + B_m, P_{xi0} + B_p
  Density flux_m, flux_p;                // P_{xi0} + R4_m, E_{xi0} + R4_p
};

// Quadratic densities of a localizer: kind 0 mass, 1 momentum, 2 energy.
Density quadratic_density(const Localizer& a, double xi0, int kind, const BandSpace& s, const CVec& u,
                          const CVec& v);

// Full set; the sextic remainders need the trilinear form (skipped when null).
DensitySet densities(const CVec& u, const Corrections& k, const TrilinearForm* C);
// Whole-field convenience: band = support of a widened by one unit.
DensitySet densities(const Field& u, const TrilinearSymbol& c, const Localizer& a, double xi0);

// Sum over the four slots of B with -i C(u) (or its conjugate) inserted.
Density sextic_remainder(const QuarticTensor& b, const BandSpace& s, const CVec& u, const CVec& Cu);
Density sextic_remainder(DensityKind kind, const Corrections& k, const TrilinearForm& C, const CVec& u);

struct FluxResidual {
  double t = 0;
  double k = 0;
  double xi0 = 0;
  double mass_residual_l2 = 0, momentum_residual_l2 = 0;
  double mass_scale = 0, momentum_scale = 0;
  double mass_relative = 0, momentum_relative = 0;
  // d/dt of the integrals and the integrated remainders.
  double mass_drift = 0, mass_remainder = 0;
  double momentum_drift = 0, momentum_remainder = 0;
};

// Requires dense steps t-2dt .. t+2dt in the trajectory.
FluxResidual flux_residual(const Trajectory& tr, const Corrections& k, const TrilinearForm& C, double t);

void write_flux_csv(std::ostream& os, const std::vector<FluxResidual>& rows);

}  // namespace nlslab
