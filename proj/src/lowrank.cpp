#include "nlslab/lowrank.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <random>
#include <sstream>

namespace nlslab {
namespace {

std::vector<double> cheb_nodes(double lo, double hi, int q) {
  std::vector<double> x(q);
  for (int j = 0; j < q; ++j) x[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(kPi * j / (q - 1));
  return x;
}

double bary_weight(int j, int q) {
  double w = (j % 2) ? -1.0 : 1.0;
  if (j == 0 || j == q - 1) w *= 0.5;
  return w;
}

// Number of leading singular values to keep so the discarded sum stays below budget.
int keep_count(const Eigen::VectorXd& s, double budget) {
  int k = static_cast<int>(s.size());
  double tail = 0;
  while (k > 0 && tail + s(k - 1) <= budget) tail += s(--k);
  return std::max(k, 0);
}

}  // namespace

std::vector<double> LowRankDecomposition::interpolation_matrix(const std::vector<double>& xs) const {
  const auto x = cheb_nodes(lo, hi, nodes);
  std::vector<double> m(xs.size() * nodes, 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double* row = &m[i * nodes];
    int exact = -1;
    double den = 0;
    for (int j = 0; j < nodes; ++j) {
      const double d = xs[i] - x[j];
      if (d == 0) {
        exact = j;
        break;
      }
      row[j] = bary_weight(j, nodes) / d;
      den += row[j];
    }
    if (exact >= 0) {
      std::fill(row, row + nodes, 0.0);
      row[exact] = 1.0;
    } else {
      for (int j = 0; j < nodes; ++j) row[j] /= den;
    }
  }
  return m;
}

cplx LowRankDecomposition::evaluate(double x1, double x2, double x3) const {
  const auto m = interpolation_matrix({x1, x2, x3});
  cplx out = 0;
  for (const auto& t : terms) {
    cplx v[3] = {0, 0, 0};
    for (int s = 0; s < 3; ++s)
      for (int j = 0; j < nodes; ++j) v[s] += m[s * nodes + j] * t[s][j];
    out += v[0] * v[1] * v[2];
  }
  return out;
}

LowRankDecomposition lowrank_approximate(const TrilinearSymbol& c, double lo, double hi, double tol,
                                         int max_rank) {
  if (!(hi > lo)) throw ParameterError("low-rank box must have hi > lo");
  LowRankDecomposition best;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<std::array<double, 3>> probes(2000);
  for (auto& p : probes) p = {U(rng), U(rng), U(rng)};
  std::vector<cplx> probe_vals(probes.size());
  double probe_sup = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    probe_vals[i] = c(probes[i][0], probes[i][1], probes[i][2]);
    probe_sup = std::max(probe_sup, std::abs(probe_vals[i]));
  }

  for (int q : {16, 32, 64, 128}) {
    LowRankDecomposition d;
    d.lo = lo;
    d.hi = hi;
    d.nodes = q;
    d.tolerance = tol;
    const auto x = cheb_nodes(lo, hi, q);
    Eigen::MatrixXcd A(q, q * q);
    double tmax = 0;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b)
        for (int e = 0; e < q; ++e) {
          A(a, b * q + e) = c(x[a], x[b], x[e]);
          tmax = std::max(tmax, std::abs(A(a, b * q + e)));
        }
    if (tmax == 0) {
      d.converged = true;
      d.status = "zero symbol";
      return d;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> outer(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s1 = outer.singularValues();
    const double budget = 0.25 * tol * tmax;
    const int r1 = std::max(1, keep_count(s1, budget));
    for (int r = 0; r < r1 && d.rank() <= max_rank; ++r) {
      Eigen::MatrixXcd W(q, q);
      for (int b = 0; b < q; ++b)
        for (int e = 0; e < q; ++e) W(b, e) = s1(r) * std::conj(outer.matrixV()(b * q + e, r));
      Eigen::JacobiSVD<Eigen::MatrixXcd> inner(W, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXd s2 = inner.singularValues();
      const int r2 = std::max(1, keep_count(s2, budget / r1));
      for (int t = 0; t < r2; ++t) {
        std::array<CVec, 3> term{CVec(q), CVec(q), CVec(q)};
        for (int j = 0; j < q; ++j) {
          term[0][j] = outer.matrixU()(j, r);
          term[1][j] = s2(t) * inner.matrixU()(j, t);
          term[2][j] = std::conj(inner.matrixV()(j, t));
        }
        d.terms.push_back(std::move(term));
      }
    }
    double err = 0;
    for (std::size_t i = 0; i < probes.size(); ++i)
      err = std::max(err, std::abs(d.evaluate(probes[i][0], probes[i][1], probes[i][2]) - probe_vals[i]));
    d.sup_error = probe_sup > 0 ? err / probe_sup : err;
    std::ostringstream os;
    os << "nodes " << q << ", rank " << d.rank() << ", sampled sup error " << d.sup_error;
    d.status = os.str();
    if (d.rank() > max_rank) {
      d.status += " (rank cap " + std::to_string(max_rank) + " exceeded)";
      return d;
    }
    best = d;
    if (d.sup_error <= tol) {
      best.converged = true;
      return best;
    }
  }
  best.status += " (tolerance not reached)";
  return best;
}

}  // namespace nlslab
