#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlslab/conservation.hpp"
#include "nlslab/envelope.hpp"
#include "nlslab/solver.hpp"

namespace nlslab {

// Entries of the envelope at or below this are treated as degenerate.
inline constexpr double kEnvelopeFloor = 1e-12;

// (1 + xi^2)^{s/2}.
double sobolev_weight(double xi, double s);

// Band-coefficient helpers on a padded relative grid; integrals are exact
// for the band-limited integrands involved.
double lp_norm_pow(const CVec& u, const BandSpace& s, int p);  // int |u|^p dx
// || d/dx (u conj(v(. + x0))) ||_{L2}^2 (derivative optional, Sobolev weight optional).
double product_l2_sq(const CVec& u, const CVec& v, const BandSpace& s, double x0, bool derivative,
                     double sobolev = 0.0);

struct BilinearEntry {
  int k1 = 0, k2 = 0;
  double x0 = 0;
  double value = 0;  // || d/dx (u_k1 conj(u_k2(.+x0))) ||_{L2_t L2_x}
  double plain = 0;  // || u_k1 conj(u_k2(.+x0)) ||_{L2_t L2_x}
  double ratio = 0;  // value / (eps^2 c_k1 c_k2 <k1-k2>^{1/2}), NaN when degenerate
};

struct NormReport {
  double eps = 0;
  std::vector<int> bins;
  std::vector<double> envelope;  // c_k per bin
  std::vector<double> linf_l2;   // ||u_k||_{Linf L2}
  std::vector<double> l6;        // ||u_k||_{L6_{t,x}}
  std::vector<double> x_k;       // X_k norms
  double x_norm = 0;
  std::vector<BilinearEntry> bilinear;
  std::vector<double> ratio_ee;  // ||u_k||_{Linf L2} / (eps c_k)
  std::vector<double> ratio_se;  // ||u_k||_{L6} / (eps c_k)^{2/3}
  std::vector<int> degenerate_bins;
  // Fitted constants: max of each ratio table, and K in
  // ||u_k1 v_k2|| <= K <k1-k2>^{-1/2} X_k1 X_k2 over k1 != k2.
  double fit_ee = 0, fit_se = 0, fit_bi = 0, fit_ab = 0, fit_separate = 0;
  bool finite() const;
};

// Trajectory snapshots must be at most 0.1 apart.
NormReport norms(const Trajectory& tr, const std::vector<int>& bins, const Envelope& env, double eps,
                 const std::vector<double>& x0_list);

// Wave-packet norm sum_k sum_j ||chi_j(x - 2tk) u_k||_{Linf_t L2_x}^2 over unit windows
// (max over windows); per-bin values in xk when given.
double x_norm(const Trajectory& tr, const std::vector<int>& bins, const SpatialPartition& tubes,
              std::vector<double>* xk = nullptr);
double x_norm_window(const std::vector<double>& times, const std::vector<CVec>& states, const BandSpace& s,
                     int k, const SpatialPartition& tubes);

struct GlobalBounds {
  double eps = 0;
  double linf_l2 = 0, l6 = 0;
  std::vector<double> x0_list;
  std::vector<double> bilinear;  // || d/dx (u conj u(.+x0)) ||_{L2_t H^{-1/2}}
  double ratio_l2 = 0, ratio_l6 = 0, ratio_bi = 0;
};
GlobalBounds global_bounds(const Trajectory& tr, double eps, const std::vector<double>& x0_list);

struct SlopeFit {
  double slope = 0, intercept = 0;
  double ci95 = 0;  // half width
  double r2 = 0;
  bool degenerate = false;
};
SlopeFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double floor = 0.0);

struct ScalingConfig {
  GridSpec grid;
  Band band{0, -1};
  Localizer a = Localizer::everywhere();
  double xi0 = 0;
  double dt = 1e-3;
  double t_star = 0.5;
  double floor = 1e-13;  // drifts below floor * mass are numerical noise
};
using DataFamily = std::function<Field(double eps)>;

struct ScalingReport {
  std::vector<double> eps;
  std::vector<double> raw_drift, modified_drift;        // |d/dt int M_a|, |d/dt int M#_a| (differenced)
  std::vector<double> raw_formula, modified_formula;    // |int C4_m|, |int R6_m|
  SlopeFit raw, modified;
};
ScalingReport scaling_study(const TrilinearSymbol& c, const DataFamily& data, const std::vector<double>& eps_ladder,
                            const ScalingConfig& cfg);

void write_norms_csv(std::ostream& per_bin, std::ostream& pairwise, const NormReport& r);
std::string norms_summary_json(const NormReport& r, const GlobalBounds& g);
void write_scaling_csv(std::ostream& os, const ScalingReport& r);

}  // namespace nlslab
