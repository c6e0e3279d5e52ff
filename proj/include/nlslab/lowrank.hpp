#pragma once

#include <array>
#include <string>
#include <vector>

#include "nlslab/symbol.hpp"

namespace nlslab {

// Separable expansion c(x1,x2,x3) ~ sum_t f_t(x1) g_t(x2) h_t(x3) on [lo, hi]^3.
// Factors are stored at Chebyshev points of the second kind and interpolated
// barycentrically.
struct LowRankDecomposition {
  double lo = 0, hi = 0;
  int nodes = 0;
  std::vector<std::array<CVec, 3>> terms;
  double sup_error = 0;  // sampled, relative to the sampled sup of |c|
  double tolerance = 0;
  bool converged = false;
  std::string status;

  int rank() const { return static_cast<int>(terms.size()); }
  cplx evaluate(double x1, double x2, double x3) const;
  // Interpolation matrix rows for the given abscissae (size xs.size() * nodes).
  std::vector<double> interpolation_matrix(const std::vector<double>& xs) const;
};

// Adaptive in the node count (16, 32, 64, 128); stops when the sampled sup
// error is within tol or the rank exceeds max_rank (converged = false).
LowRankDecomposition lowrank_approximate(const TrilinearSymbol& c, double lo, double hi, double tol = 1e-10,
                                         int max_rank = 400);

}  // namespace nlslab
