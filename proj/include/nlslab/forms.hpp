#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nlslab/division.hpp"
#include "nlslab/lattice.hpp"
#include "nlslab/lowrank.hpp"
#include "nlslab/symbol.hpp"

namespace nlslab {

// A grid together with the contiguous band of modes the dynamics live on.
struct BandSpace {
  GridSpec grid;
  Band band;
  int n() const { return band.size(); }
  double xi(int i) const { return (band.lo + i) * grid.dk(); }
};

// Density F(x) = sum_o c_o e^{i o dk x}, o = -half..half.
struct Density {
  double dk = 0;
  double circumference = 0;
  int half = 0;
  CVec c;

  static Density zeros(double dk, double circumference, int half) {
    return Density{dk, circumference, half, CVec(2 * half + 1)};
  }
  static Density zeros_like(const BandSpace& s, int half) {
    return zeros(s.grid.dk(), s.grid.circumference, half);
  }
  cplx& at(int o) { return c[o + half]; }
  cplx at(int o) const { return (o < -half || o > half) ? cplx(0) : c[o + half]; }
  // Integral over one period.
  cplx integral() const { return circumference * c[half]; }
  Density derivative() const;
  // x -> F(x + x0).
  Density translated(double x0) const;
  Density widened(int new_half) const;
  Density& operator+=(const Density& o);
  Density& operator-=(const Density& o);
  Density& operator*=(cplx s);
  // L2 norm over one period.
  double l2() const;
  double max_abs() const;  // bound on sup |F| via the coefficient sum
  CVec samples(const GridSpec& g) const;
};

Density operator+(Density a, const Density& b);
Density operator-(Density a, const Density& b);
Density operator*(cplx s, Density a);
// Integral of F(x) G(x) over one period.
cplx integral_product(const Density& F, const Density& G);

enum class TrilinearStrategy { Auto, Pointwise, Tensor, LowRank, OnTheFly };

struct TrilinearOptions {
  TrilinearStrategy strategy = TrilinearStrategy::Auto;
  long tensor_limit = 1L << 23;  // entries
  double lowrank_tol = 1e-11;
  int max_rank = 400;
};

// C(u, ubar, u) restricted to band inputs.
class TrilinearForm {
 public:
  TrilinearForm(const TrilinearSymbol& c, const BandSpace& space, const TrilinearOptions& opt = {});

  // Galerkin output on the input band.
  CVec apply(const CVec& u) const;
  // Complete output on the band [2 lo - hi, 2 hi - lo] (relative index i1 - i2 + i3 + n - 1).
  CVec apply_full(const CVec& u) const;

  TrilinearStrategy strategy() const { return strategy_; }
  const BandSpace& space() const { return space_; }
  const TrilinearSymbol& symbol() const { return c_; }
  const LowRankDecomposition* decomposition() const { return lowrank_.get(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  CVec apply_impl(const CVec& u, bool full) const;
  TrilinearSymbol c_;
  BandSpace space_;
  TrilinearStrategy strategy_;
  std::vector<cplx> tensor_;
  std::shared_ptr<LowRankDecomposition> lowrank_;
  std::vector<std::array<CVec, 3>> band_factors_;
  std::vector<std::string> warnings_;
};

// Whole-field entry point: detects the input's spectral support, refuses
// input reaching beyond Nyquist/2 and returns the product on every mode the
// grid represents.
Field apply_trilinear(const TrilinearSymbol& c, const Field& u, const TrilinearOptions& opt = {});

// Quartic symbol sampled on band^4, index ((i1*n + i2)*n + i3)*n + i4.
struct QuarticTensor {
  int n = 0;
  bool zero = true;
  std::vector<cplx> v;
  cplx operator()(int a, int b, int c, int d) const { return v[((std::size_t(a) * n + b) * n + c) * n + d]; }
};

// Throws DomainError when n^4 exceeds the limit.
void check_quartic_cost(int n, long limit = 60'000'000L);
QuarticTensor tabulate_quartic(const QuarticSymbol& s, const BandSpace& space);
// Tabulates b and r of a localized division in one pass.
void tabulate_division(const LocalizedDivision& d, const BandSpace& space, QuarticTensor& b, QuarticTensor& r);

// x -> sum T(i1..i4) a1 conj(a2) a3 conj(a4) e^{i (xi1-xi2+xi3-xi4) x}.
Density quartic_density(const QuarticTensor& T, const BandSpace& s, const CVec& a1, const CVec& a2,
                        const CVec& a3, const CVec& a4);
// Diagonal-only evaluation: the integral of the density.
cplx quartic_functional(const QuarticTensor& T, const BandSpace& s, const CVec& a1, const CVec& a2,
                        const CVec& a3, const CVec& a4);
cplx quartic_functional(const QuarticSymbol& sym, const BandSpace& s, const CVec& a1, const CVec& a2,
                        const CVec& a3, const CVec& a4);

// Bilinear density with symbol m(xi, eta): sum m a1 conj(a2) e^{i(xi-eta)x}.
Density bilinear_density(const std::function<double(double, double)>& m, const BandSpace& s, const CVec& a1,
                         const CVec& a2);

// Generic even form of arity 4 or 6 with alternating conjugation, by direct
// summation over band^arity (small bands only).
struct EvenForm {
  int arity = 4;
  std::function<cplx(const double*)> symbol;
};
Density apply_even_density(const EvenForm& L, const BandSpace& s, const std::vector<CVec>& args);

}  // namespace nlslab
