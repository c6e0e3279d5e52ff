#pragma once

#include <iosfwd>
#include <vector>

#include "nlslab/lattice.hpp"

namespace nlslab {

// Nonnegative sequence c_k on k = -k_max..k_max.
struct Envelope {
  int k_max = 0;
  std::vector<double> values;
  double admissibility_constant = 4.0;
  bool admissible = false;
  bool degenerate = false;

  static Envelope zeros(int k_max) {
    return Envelope{k_max, std::vector<double>(2 * k_max + 1, 0.0)};
  }
  double& at(int k) { return values[k + k_max]; }
  double at(int k) const { return values[k + k_max]; }
  double norm() const;
};

Envelope maximal_function(const Envelope& c);
Envelope admissibilize(const Envelope& c0, double big_c = 4.0);
Envelope envelope_of(const Field& u, double eps, const UnitPartition& partition, double big_c = 4.0);
double interval_mass(const Envelope& c, int a, int b);

void write_envelope_csv(std::ostream& os, const Envelope& c);

}  // namespace nlslab
