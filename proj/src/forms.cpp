#include "nlslab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlslab/fft.hpp"

namespace nlslab {

Density Density::derivative() const {
  Density d = *this;
  for (int o = -half; o <= half; ++o) d.c[o + half] *= cplx(0, o * dk);
  return d;
}

Density Density::translated(double x0) const {
  Density d = *this;
  for (int o = -half; o <= half; ++o) d.c[o + half] *= std::polar(1.0, o * dk * x0);
  return d;
}

Density Density::widened(int new_half) const {
  if (new_half <= half) return *this;
  Density d = zeros(dk, circumference, new_half);
  for (int o = -half; o <= half; ++o) d.at(o) = c[o + half];
  return d;
}

Density& Density::operator+=(const Density& o) {
  if (c.empty()) {
    *this = zeros(o.dk, o.circumference, o.half);
  } else if (o.half > half) {
    *this = widened(o.half);
  }
  for (int k = -o.half; k <= o.half; ++k) at(k) += o.c[k + o.half];
  return *this;
}

Density& Density::operator-=(const Density& o) {
  if (c.empty()) {
    *this = zeros(o.dk, o.circumference, o.half);
  } else if (o.half > half) {
    *this = widened(o.half);
  }
  for (int k = -o.half; k <= o.half; ++k) at(k) -= o.c[k + o.half];
  return *this;
}

Density& Density::operator*=(cplx s) {
  for (auto& v : c) v *= s;
  return *this;
}

Density operator+(Density a, const Density& b) { return a += b; }
Density operator-(Density a, const Density& b) { return a -= b; }
Density operator*(cplx s, Density a) { return a *= s; }

double Density::l2() const {
  double s = 0;
  for (const auto& v : c) s += std::norm(v);
  return std::sqrt(circumference * s);
}

double Density::max_abs() const {
  double s = 0;
  for (const auto& v : c) s += std::abs(v);
  return s;
}

CVec Density::samples(const GridSpec& g) const {
  if (half >= g.num_points / 2) throw DomainError("density bandwidth exceeds the grid");
  CVec spec(g.num_points);
  for (int o = -half; o <= half; ++o) spec[g.slot(o)] = c[o + half];
  return Field::from_spectrum(g, spec).samples;
}

cplx integral_product(const Density& F, const Density& G) {
  const int h = std::min(F.half, G.half);
  cplx s = 0;
  for (int o = -h; o <= h; ++o) s += F.at(o) * G.at(-o);
  return F.circumference * s;
}

namespace {

int padded_size(int n, bool full) { return fft::next_pow2(full ? 3 * n - 2 : 2 * n - 1); }

}  // namespace

TrilinearForm::TrilinearForm(const TrilinearSymbol& c, const BandSpace& space, const TrilinearOptions& opt)
    : c_(c), space_(space), strategy_(opt.strategy) {
  const int n = space.n();
  if (n <= 0) throw DomainError("empty band");
  if (strategy_ == TrilinearStrategy::Auto) {
    if (c.is_constant()) strategy_ = TrilinearStrategy::Pointwise;
    else if (double(n) * n * n <= double(opt.tensor_limit)) strategy_ = TrilinearStrategy::Tensor;
    else strategy_ = TrilinearStrategy::LowRank;
  }
  if (strategy_ == TrilinearStrategy::Pointwise && !c.is_constant())
    throw ParameterError("pointwise strategy requires a constant symbol");
  if (strategy_ == TrilinearStrategy::Tensor) {
    tensor_.resize(std::size_t(n) * n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          tensor_[(std::size_t(a) * n + b) * n + d] = c(space.xi(a), space.xi(b), space.xi(d));
  }
  if (strategy_ == TrilinearStrategy::LowRank) {
    lowrank_ = std::make_shared<LowRankDecomposition>(
        lowrank_approximate(c, space.xi(0), space.xi(n - 1), opt.lowrank_tol, opt.max_rank));
    if (!lowrank_->converged) {
      warnings_.push_back("low-rank expansion not converged (" + lowrank_->status +
                          "); falling back to exact summation");
      strategy_ = TrilinearStrategy::OnTheFly;
    } else {
      std::vector<double> xs(n);
      for (int i = 0; i < n; ++i) xs[i] = space.xi(i);
      const auto m = lowrank_->interpolation_matrix(xs);
      const int q = lowrank_->nodes;
      for (const auto& t : lowrank_->terms) {
        std::array<CVec, 3> f{CVec(n), CVec(n), CVec(n)};
        for (int s = 0; s < 3; ++s)
          for (int i = 0; i < n; ++i) {
            cplx v = 0;
            for (int j = 0; j < q; ++j) v += m[std::size_t(i) * q + j] * t[s][j];
            f[s][i] = v;
          }
        band_factors_.push_back(std::move(f));
      }
    }
  }
}

CVec TrilinearForm::apply(const CVec& u) const { return apply_impl(u, false); }
CVec TrilinearForm::apply_full(const CVec& u) const { return apply_impl(u, true); }

CVec TrilinearForm::apply_impl(const CVec& u, bool full) const {
  const int n = space_.n();
  if (static_cast<int>(u.size()) != n) throw DomainError("input does not match the band");
  const int out_n = full ? 3 * n - 2 : n;
  const int shift = full ? n - 1 : 0;  // output slot of relative frequency o is o + shift
  CVec out(out_n);
  if (c_.is_zero()) return out;

  if (strategy_ == TrilinearStrategy::Pointwise || strategy_ == TrilinearStrategy::LowRank) {
    const int M = padded_size(n, full);
    CVec acc(M);
    auto to_phys = [&](const CVec& w) {
      CVec buf(M);
      std::copy(w.begin(), w.end(), buf.begin());
      return fft::inverse(buf);
    };
    if (strategy_ == TrilinearStrategy::Pointwise) {
      const CVec F = to_phys(u);
      const cplx k = c_.constant_value();
      for (int j = 0; j < M; ++j) acc[j] = k * F[j] * std::norm(F[j]);
    } else {
      CVec w(n);
      for (const auto& f : band_factors_) {
        for (int i = 0; i < n; ++i) w[i] = f[0][i] * u[i];
        const CVec A = to_phys(w);
        for (int i = 0; i < n; ++i) w[i] = std::conj(f[1][i]) * u[i];
        const CVec B = to_phys(w);
        for (int i = 0; i < n; ++i) w[i] = f[2][i] * u[i];
        const CVec H = to_phys(w);
        for (int j = 0; j < M; ++j) acc[j] += A[j] * std::conj(B[j]) * H[j];
      }
    }
    const CVec spec = fft::forward(acc);
    const double inv = 1.0 / M;
    for (int o = -shift; o < out_n - shift; ++o) out[o + shift] = spec[(o + M) % M] * inv;
    return out;
  }

  CVec uc(n);
  for (int i = 0; i < n; ++i) uc[i] = std::conj(u[i]);
  for (int a = 0; a < n; ++a) {
    if (u[a] == cplx(0)) continue;
    for (int d = 0; d < n; ++d) {
      const cplx p = u[a] * u[d];
      if (p == cplx(0)) continue;
      const int s = a + d;
      const int b_lo = full ? 0 : std::max(0, s - n + 1);
      const int b_hi = full ? n - 1 : std::min(n - 1, s);
      cplx* dst = out.data() + shift + s;
      if (strategy_ == TrilinearStrategy::Tensor) {
        const cplx* row = tensor_.data() + std::size_t(a) * n * n;
        for (int b = b_lo; b <= b_hi; ++b) dst[-b] += row[std::size_t(b) * n + d] * p * uc[b];
      } else {
        const double xa = space_.xi(a), xd = space_.xi(d);
        for (int b = b_lo; b <= b_hi; ++b) dst[-b] += c_(xa, space_.xi(b), xd) * p * uc[b];
      }
    }
  }
  return out;
}

Field apply_trilinear(const TrilinearSymbol& c, const Field& u, const TrilinearOptions& opt) {
  const GridSpec& g = u.grid;
  const CVec spec = u.spectrum();
  double peak = 0;
  for (const auto& v : spec) peak = std::max(peak, std::abs(v));
  int W = 0;
  for (int j = 0; j < g.num_points; ++j)
    if (std::abs(spec[j]) > 1e-14 * peak) W = std::max(W, std::abs(g.mode(j)));
  if (W >= g.num_points / 4)
    throw DomainError("aliasing guard: input occupies modes up to " + std::to_string(W) +
                      ", beyond Nyquist/2 (" + std::to_string(g.num_points / 4) + ")");
  const BandSpace space{g, Band{-W, W}};
  CVec coeffs(space.n());
  for (int m = -W; m <= W; ++m) coeffs[m + W] = spec[g.slot(m)];
  const TrilinearForm form(c, space, opt);
  const CVec full = form.apply_full(coeffs);
  CVec out(g.num_points);
  for (int o = -3 * W; o <= 3 * W; ++o)
    if (std::abs(o) < g.num_points / 2) out[g.slot(o)] = full[o + 3 * W];
  return Field::from_spectrum(g, out);
}

void check_quartic_cost(int n, long limit) {
  const double cost = double(n) * n * n * n;
  if (cost > double(limit)) {
    std::ostringstream os;
    os << "quartic tabulation over " << n << " band modes needs " << cost << " entries (limit " << limit
       << "); narrow the band around the localizer or shorten the circumference";
    throw DomainError(os.str());
  }
}

QuarticTensor tabulate_quartic(const QuarticSymbol& s, const BandSpace& space) {
  QuarticTensor T;
  T.n = space.n();
  if (s.zero) return T;
  check_quartic_cost(T.n);
  const int n = T.n;
  T.zero = false;
  T.v.resize(std::size_t(n) * n * n * n);
  std::size_t k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) T.v[k++] = s({space.xi(a), space.xi(b), space.xi(c), space.xi(d)});
  return T;
}

void tabulate_division(const LocalizedDivision& dv, const BandSpace& space, QuarticTensor& b, QuarticTensor& r) {
  const int n = space.n();
  b = QuarticTensor{n, true, {}};
  r = QuarticTensor{n, true, {}};
  if (dv.is_zero()) return;
  check_quartic_cost(n);
  const std::size_t total = std::size_t(n) * n * n * n;
  b.zero = r.zero = false;
  b.v.resize(total);
  r.v.resize(total);
  std::size_t k = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3)
        for (int i4 = 0; i4 < n; ++i4, ++k)
          dv.evaluate({space.xi(i1), space.xi(i2), space.xi(i3), space.xi(i4)}, b.v[k], r.v[k]);
}

Density quartic_density(const QuarticTensor& T, const BandSpace& s, const CVec& a1, const CVec& a2,
                        const CVec& a3, const CVec& a4) {
  const int n = s.n();
  Density out = Density::zeros_like(s, 2 * (n - 1));
  if (T.zero) return out;
  CVec c2(n), c4(n);
  for (int i = 0; i < n; ++i) {
    c2[i] = std::conj(a2[i]);
    c4[i] = std::conj(a4[i]);
  }
  cplx* base = out.c.data();
  for (int i1 = 0; i1 < n; ++i1) {
    if (a1[i1] == cplx(0)) continue;
    for (int i2 = 0; i2 < n; ++i2) {
      const cplx p12 = a1[i1] * c2[i2];
      for (int i3 = 0; i3 < n; ++i3) {
        const cplx p = p12 * a3[i3];
        if (p == cplx(0)) continue;
        const cplx* row = T.v.data() + ((std::size_t(i1) * n + i2) * n + i3) * n;
        // o + half = i1 - i2 + i3 - i4 + 2(n-1)
        cplx* dst = base + (i1 - i2 + i3 + 2 * (n - 1));
        for (int i4 = 0; i4 < n; ++i4) dst[-i4] += row[i4] * p * c4[i4];
      }
    }
  }
  return out;
}

cplx quartic_functional(const QuarticTensor& T, const BandSpace& s, const CVec& a1, const CVec& a2,
                        const CVec& a3, const CVec& a4) {
  const int n = s.n();
  if (T.zero) return 0.0;
  cplx acc = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        const int i4 = i1 - i2 + i3;
        if (i4 < 0 || i4 >= n) continue;
        acc += T(i1, i2, i3, i4) * a1[i1] * std::conj(a2[i2]) * a3[i3] * std::conj(a4[i4]);
      }
  return s.grid.circumference * acc;
}

cplx quartic_functional(const QuarticSymbol& sym, const BandSpace& s, const CVec& a1, const CVec& a2,
                        const CVec& a3, const CVec& a4) {
  const int n = s.n();
  if (sym.zero) return 0.0;
  cplx acc = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const cplx p12 = a1[i1] * std::conj(a2[i2]);
      if (p12 == cplx(0)) continue;
      for (int i3 = 0; i3 < n; ++i3) {
        const int i4 = i1 - i2 + i3;
        if (i4 < 0 || i4 >= n) continue;
        acc += sym({s.xi(i1), s.xi(i2), s.xi(i3), s.xi(i4)}) * p12 * a3[i3] * std::conj(a4[i4]);
      }
    }
  return s.grid.circumference * acc;
}

Density bilinear_density(const std::function<double(double, double)>& m, const BandSpace& s, const CVec& a1,
                         const CVec& a2) {
  const int n = s.n();
  Density out = Density::zeros_like(s, n - 1);
  for (int i1 = 0; i1 < n; ++i1) {
    if (a1[i1] == cplx(0)) continue;
    for (int i2 = 0; i2 < n; ++i2) {
      const double w = m(s.xi(i1), s.xi(i2));
      if (w != 0) out.c[i1 - i2 + n - 1] += w * a1[i1] * std::conj(a2[i2]);
    }
  }
  return out;
}

Density apply_even_density(const EvenForm& L, const BandSpace& s, const std::vector<CVec>& args) {
  if (L.arity != 4 && L.arity != 6) throw ParameterError("even forms have arity 4 or 6");
  if (static_cast<int>(args.size()) != L.arity)
    throw ParameterError("arity " + std::to_string(L.arity) + " form given " + std::to_string(args.size()) +
                         " arguments");
  const int n = s.n();
  if (std::pow(double(n), L.arity) > 2e8) throw DomainError("band too wide for direct even-form summation");
  const int k = L.arity;
  Density out = Density::zeros_like(s, (k / 2) * (n - 1));
  std::vector<int> idx(k, 0);
  std::vector<double> xi(k);
  for (;;) {
    cplx p = 1;
    int o = 0;
    for (int j = 0; j < k; ++j) {
      const cplx v = args[j][idx[j]];
      p *= (j % 2) ? std::conj(v) : v;
      o += (j % 2) ? -idx[j] : idx[j];
      xi[j] = s.xi(idx[j]);
    }
    if (p != cplx(0)) out.c[o + (k / 2) * (n - 1)] += L.symbol(xi.data()) * p;
    int j = k - 1;
    while (j >= 0 && ++idx[j] == n) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

}  // namespace nlslab
