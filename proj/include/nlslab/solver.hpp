#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nlslab/forms.hpp"

namespace nlslab {

struct SolverConfig {
  double dt = 1e-3;
  double horizon = 10.0;
  double snapshot_every = 0.1;
  // Every step inside [dense_from, dense_to] is stored when dense is set.
  bool dense = false;
  double dense_from = 0.0;
  double dense_to = std::numeric_limits<double>::infinity();
  // Modes carried by the dynamics; empty means +-(k_max + 1).
  Band band{0, -1};
  bool enforce_guards = true;
  TrilinearOptions trilinear;
};

Band default_band(const GridSpec& g);

struct Trajectory {
  BandSpace space;
  double dt = 0;
  double eps = 0;
  std::vector<double> times;
  std::vector<CVec> states;
  std::vector<double> dense_times;
  std::vector<CVec> dense_states;
  std::vector<std::string> warnings;
  bool aborted = false;
  std::string abort_reason;

  Field field(std::size_t i) const { return field_from_band(space.grid, space.band, states.at(i)); }
  // Index of the dense step closest to t, or -1.
  int dense_index(double t) const;
};

// u(t) = e^{-i xi^2 t} u0 on every grid mode.
Field linear_propagate(const Field& u0, double t);
CVec linear_propagate(const CVec& coeffs, const BandSpace& space, double t);

// Validates dt and group-speed guards; throws GuardError with a remediation hint.
void check_guards(const BandSpace& space, const SolverConfig& cfg);

Trajectory simulate(const Field& u0, const TrilinearSymbol& c, const SolverConfig& cfg);
Trajectory simulate(const CVec& u0, const TrilinearForm& form, const SolverConfig& cfg);

struct ConvergenceReport {
  double error_dt = 0, error_dt2 = 0;  // |u_dt - u_dt/2|, |u_dt/2 - u_dt/4| at the horizon
  double temporal_order = 0;
  double spatial_difference = 0;  // |u_N - u_2N| at the horizon
  double spectral_tail = 0;       // edge-mode amplitude relative to the peak
  bool order_ok = false;
  bool resolved = false;
  bool degraded = false;
};

ConvergenceReport convergence_test(const Field& u0, const TrilinearSymbol& c, const SolverConfig& cfg);

}  // namespace nlslab
