#pragma once

#include <string>
#include <vector>

#include "nlslab/symbol.hpp"

namespace nlslab {

struct DivisionValue {
  cplx b{};        // b4 in c4 = Delta4xi * r~4 - tilde Delta4xi^2 * b4
  cplx r_tilde{};  // r~4
};

// (b4, r~4) with c4 = Delta4xi r~4 - tilde(Delta4xi^2) b4, built from the
// three-region construction. When c4 vanishes on the whole hyperplane
// Delta4xi = 0 the pair is b4 = 0, r~4 = c4 / Delta4xi instead. Evaluation is
// pure and reentrant.
class DivisionPair {
 public:
  DivisionPair() = default;
  DivisionPair(QuarticSymbol c4, ResonanceThresholds th, bool on_hyperplane = false)
      : c4_(std::move(c4)), th_(th), hyperplane_(on_hyperplane) {}

  DivisionValue evaluate(const Quad& xi) const;
  // Recentered flux r~4 + 2(xi_avg - xi0) b4.
  cplx r4(const Quad& xi, double xi0 = 0.0) const;

  QuarticSymbol b4() const;
  QuarticSymbol r4_tilde() const;
  QuarticSymbol r4_symbol(double xi0 = 0.0) const;
  const QuarticSymbol& source() const { return c4_; }
  const ResonanceThresholds& thresholds() const { return th_; }
  bool is_zero() const { return c4_.zero; }
  bool divides_on_hyperplane() const { return hyperplane_; }

 private:
  QuarticSymbol c4_{nullptr, QuarticTag::Generic, true};
  ResonanceThresholds th_;
  bool hyperplane_ = false;
};

// True when c4 vanishes on Delta4xi = 0 inside [-box, box]^4 (sampled).
bool vanishes_on_hyperplane(const QuarticSymbol& c4, double box = 20.0, int n = 400, double tol = 1e-12);

// Largest |c4| over samples of the resonant set {xi1, xi3} = {xi2, xi4} in
// [-box, box]^4; scale is max(1, |c4|) over generic samples.
struct ResonantSup {
  double value = 0;
  double scale = 1;
  Quad at{};
};
ResonantSup resonant_sup(const QuarticSymbol& c4, double box = 20.0, int n = 1000);

// Samples c4 on the resonant set inside [-box, box]^4 and rejects it when
// |c4| exceeds tol * max(1, |c4|_sampled).
void check_resonant_vanishing(const QuarticSymbol& c4, double box = 20.0, int n = 1000,
                              double tol = 1e-8);
DivisionPair divide(const QuarticSymbol& c4, const ResonanceThresholds& th = {}, bool validate = true);

struct DivisionBounds {
  double k_b = 0;          // max |b4| <d_hi><d_med>
  double k_r = 0;          // max |r~4| <d_med>
  double max_residual = 0; // max |c4 - (eta1 r~ - tilde b)| / (1 + |c4|)
  int samples = 0;
};

DivisionBounds fit_division_bounds(const DivisionPair& pair, double box, int n, unsigned seed = 7);

enum class DensityKind { Mass, Momentum };

// Localized division in conservation form:
//   c4 - i Delta4(xi - xi0)^2 b = i Delta4xi r_{xi0},
// with b = i b4 and r_{xi0} = -i (r~4 + 2(xi_avg - xi0) b4).
struct LocalizedDivision {
  DensityKind kind = DensityKind::Mass;
  double xi0 = 0;
  Localizer a;
  TrilinearSymbol c;
  QuarticSymbol c4;
  DivisionPair pair;
  std::vector<std::string> warnings;

  bool is_zero() const { return c4.zero; }
  void evaluate(const Quad& xi, cplx& b, cplx& r) const {
    const DivisionValue v = pair.evaluate(xi);
    const double avg = (xi[0] + xi[1] + xi[2] + xi[3]) / 4;
    b = kI * v.b;
    r = -kI * (v.r_tilde + 2 * (avg - xi0) * v.b);
  }
};

LocalizedDivision localized_division(const TrilinearSymbol& c, const Localizer& a, double xi0,
                                     DensityKind kind, const ResonanceThresholds& th = {});

}  // namespace nlslab
