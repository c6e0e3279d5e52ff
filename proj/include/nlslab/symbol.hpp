#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nlslab/common.hpp"
#include "nlslab/lattice.hpp"

namespace nlslab {

// Symbol c(xi1, xi2, xi3) of the trilinear nonlinearity, always symmetrized
// in (xi1, xi3).
class TrilinearSymbol {
 public:
  using RawFn = std::function<cplx(double, double, double)>;

  TrilinearSymbol() : constant_(true), spec_("0") {}
  static TrilinearSymbol constant(cplx v);
  static TrilinearSymbol from_function(RawFn raw, std::string spec);

  cplx operator()(double x1, double x2, double x3) const {
    if (constant_) return value_;
    return 0.5 * ((*raw_)(x1, x2, x3) + (*raw_)(x3, x2, x1));
  }

  bool is_constant() const { return constant_; }
  bool is_zero() const { return constant_ && value_ == cplx(0); }
  cplx constant_value() const { return value_; }
  const std::string& spec() const { return spec_; }
  // FNV-1a of the symbol source text, hex.
  std::string spec_hash() const;

  std::string name;
  int declared_smoothness = 4;
  std::vector<std::string> declared_hypotheses;

 private:
  struct Blank {};
  explicit TrilinearSymbol(Blank) {}
  std::shared_ptr<const RawFn> raw_;
  bool constant_ = false;
  cplx value_{};
  std::string spec_;
};

TrilinearSymbol parse_symbol(const std::string& text);
// Symbol file: '#'-prefixed "key: value" metadata lines (name, hypotheses,
// smoothness) followed by an expression, or a line "table: PATH" naming a CSV.
TrilinearSymbol load_symbol_file(const std::string& path);
// CSV rows xi1,xi2,xi3,re,im on a full rectilinear grid; trilinear
// interpolation inside, clamped to the boundary outside.
TrilinearSymbol load_table_symbol(const std::string& path);

struct HypothesisReport {
  std::map<int, double> h1_max_derivative_bounds;  // order -> sampled sup
  double h2_max_imag_on_slice = 0;
  double h3_min_diagonal = 0;
  bool h1 = false, h2 = false, h3 = false;
};

HypothesisReport check_hypotheses(const TrilinearSymbol& c, double box, int n_samples,
                                  unsigned seed = 1);

// xi -> c(xi1 - k, xi2 - k, xi3 - k).
TrilinearSymbol galilean_shift(const TrilinearSymbol& c, double k);

enum class QuarticTag { Mass, Momentum, CorrectionB, FluxR, MorawetzJ, Generic };

struct QuarticSymbol {
  std::function<cplx(const Quad&)> fn;
  QuarticTag tag = QuarticTag::Generic;
  bool zero = false;
  cplx operator()(const Quad& x) const { return zero ? cplx(0) : fn(x); }
};

QuarticSymbol quartic_mass_symbol(const TrilinearSymbol& c);
// Localized mass symbol c4_{m,a}; reduces to quartic_mass_symbol for a == 1.
QuarticSymbol quartic_mass_symbol(const TrilinearSymbol& c, const Localizer& a);
QuarticSymbol quartic_momentum_symbol(const TrilinearSymbol& c, const Localizer& a, double xi0);

struct ResonanceThresholds {
  double theta = 0.5;  // "x << y" means x <= theta*y; Omega3 needs core >= 1/theta
  double core = 2.0;   // Omega1 is division_scale <= core, falling off by 2*core
  double quotient_switch = 1e-4;
  double stencil_step = 1e-3;
};

struct ResonancePoint {
  Quad xi{};
  std::array<double, 4> eta{};  // eta1 = Delta4 xi, eta4 = sum
  double delta4 = 0, delta4_sq = 0, tilde_delta4_sq = 0;
  double d_hi = 0, d_med = 0;
  std::array<double, 3> region_weights{};  // Omega1, Omega2, Omega3
};

// Smooth step: 1 for t <= 0, 0 for t >= 1.
double smooth_step(double t);
ResonancePoint resonance(const Quad& xi, const ResonanceThresholds& th = {});
std::array<double, 3> region_weights(double eta1, double d_med, const ResonanceThresholds& th);

// Scale the division regions are cut on: max(|eta1|, min(|eta2|, |eta3|)).
double division_scale(double eta1, double eta2, double eta3);

inline Quad xi_from_eta(const std::array<double, 4>& e) {
  return {(e[0] + e[1] + e[2] + e[3]) / 4, (-e[0] + e[1] - e[2] + e[3]) / 4,
          (e[0] - e[1] - e[2] + e[3]) / 4, (-e[0] - e[1] + e[2] + e[3]) / 4};
}
inline std::array<double, 4> eta_from_xi(const Quad& x) {
  return {x[0] - x[1] + x[2] - x[3], x[0] + x[1] - x[2] - x[3], x[0] - x[1] - x[2] + x[3],
          x[0] + x[1] + x[2] + x[3]};
}

}  // namespace nlslab
