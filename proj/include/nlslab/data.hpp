#pragma once

#include <cstdint>
#include <vector>

#include "nlslab/lattice.hpp"

namespace nlslab {

// a * exp(-(x - center)^2 / (2 width^2)) * exp(i carrier x), periodized.
struct PacketSpec {
  double amplitude = 1.0;
  double center = 0.0;
  double width = 3.0;
  double carrier = 0.0;
};

Field packet_field(const GridSpec& g, const std::vector<PacketSpec>& packets);

// One packet per bin with random phase, amplitude in [0.5, 1] and center in
// [-spread, spread]; rescaled so that ||u|| = eps.
struct RandomPhaseSpec {
  std::vector<int> bins;
  double eps = 0.05;
  double width = 4.0;
  double spread = 0.0;
  std::uint64_t seed = 1;
};

Field random_phase_field(const GridSpec& g, const RandomPhaseSpec& spec);

// Scales u so that its L2 norm equals eps.
Field with_norm(Field u, double eps);

}  // namespace nlslab
