#include "nlslab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "nlslab/expr.hpp"

namespace nlslab {

TrilinearSymbol TrilinearSymbol::constant(cplx v) {
  TrilinearSymbol s{Blank{}};
  s.constant_ = true;
  s.value_ = v;
  std::ostringstream os;
  os.precision(17);
  if (v.imag() == 0) os << v.real();
  else os << "(" << v.real() << ")+(" << v.imag() << ")*i";
  s.spec_ = os.str();
  return s;
}

TrilinearSymbol TrilinearSymbol::from_function(RawFn raw, std::string spec) {
  TrilinearSymbol s{Blank{}};
  s.raw_ = std::make_shared<const RawFn>(std::move(raw));
  s.spec_ = std::move(spec);
  return s;
}

std::string TrilinearSymbol::spec_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : spec_) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

TrilinearSymbol parse_symbol(const std::string& text) {
  auto prog = std::make_shared<expr::Program>(expr::compile(text));
  if (prog->is_constant()) {
    TrilinearSymbol s = TrilinearSymbol::constant(prog->constant_value());
    return s;
  }
  return TrilinearSymbol::from_function(
      [prog](double a, double b, double c) { return prog->eval(a, b, c); }, text);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string dir_of(const std::string& path) {
  const auto p = path.find_last_of('/');
  return p == std::string::npos ? "" : path.substr(0, p + 1);
}

}  // namespace

TrilinearSymbol load_symbol_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open symbol file " + path);
  std::map<std::string, std::string> meta;
  std::string body, line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto colon = t.find(':');
      if (colon != std::string::npos) meta[trim(t.substr(1, colon - 1))] = trim(t.substr(colon + 1));
      continue;
    }
    body += (body.empty() ? "" : " ") + t;
  }
  TrilinearSymbol s;
  if (body.rfind("table:", 0) == 0) {
    std::string table = trim(body.substr(6));
    if (!table.empty() && table[0] != '/') table = dir_of(path) + table;
    s = load_table_symbol(table);
  } else {
    s = parse_symbol(body);
  }
  if (meta.count("name")) s.name = meta["name"];
  if (meta.count("smoothness")) s.declared_smoothness = std::stoi(meta["smoothness"]);
  if (meta.count("hypotheses")) {
    std::stringstream ss(meta["hypotheses"]);
    std::string h;
    while (std::getline(ss, h, ',')) s.declared_hypotheses.push_back(trim(h));
  }
  return s;
}

namespace {

struct Table {
  std::array<std::vector<double>, 3> axes;
  std::vector<cplx> values;

  cplx at(std::size_t i, std::size_t j, std::size_t k) const {
    return values[(i * axes[1].size() + j) * axes[2].size() + k];
  }

  cplx operator()(double x1, double x2, double x3) const {
    const double x[3] = {x1, x2, x3};
    std::size_t idx[3];
    double frac[3];
    for (int d = 0; d < 3; ++d) {
      const auto& ax = axes[d];
      const double v = std::clamp(x[d], ax.front(), ax.back());
      std::size_t i = static_cast<std::size_t>(std::upper_bound(ax.begin(), ax.end(), v) - ax.begin());
      i = std::clamp<std::size_t>(i, 1, ax.size() - 1) - 1;
      idx[d] = i;
      frac[d] = (v - ax[i]) / (ax[i + 1] - ax[i]);
    }
    cplx out = 0;
    for (int c = 0; c < 8; ++c) {
      double w = 1;
      std::size_t p[3];
      for (int d = 0; d < 3; ++d) {
        const int bit = (c >> d) & 1;
        p[d] = idx[d] + bit;
        w *= bit ? frac[d] : 1 - frac[d];
      }
      if (w != 0) out += w * at(p[0], p[1], p[2]);
    }
    return out;
  }
};

}  // namespace

TrilinearSymbol load_table_symbol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open symbol table " + path);
  struct Row {
    double x[3];
    cplx v;
  };
  std::vector<Row> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(t[0]))) continue;  // header
    std::stringstream ss(t);
    std::string cell;
    double f[5];
    int n = 0;
    while (n < 5 && std::getline(ss, cell, ',')) f[n++] = std::stod(cell);
    if (n < 4) throw ParameterError(path + ":" + std::to_string(lineno) + ": expected xi1,xi2,xi3,re[,im]");
    rows.push_back({{f[0], f[1], f[2]}, cplx(f[3], n == 5 ? f[4] : 0.0)});
  }
  auto table = std::make_shared<Table>();
  for (int d = 0; d < 3; ++d) {
    auto& ax = table->axes[d];
    for (const auto& r : rows) ax.push_back(r.x[d]);
    std::sort(ax.begin(), ax.end());
    ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
    if (ax.size() < 2) throw ParameterError(path + ": each axis needs at least two nodes");
  }
  const std::size_t n1 = table->axes[0].size(), n2 = table->axes[1].size(), n3 = table->axes[2].size();
  if (rows.size() != n1 * n2 * n3) throw ParameterError(path + ": rows do not form a full grid");
  table->values.assign(rows.size(), cplx(std::numeric_limits<double>::quiet_NaN()));
  for (const auto& r : rows) {
    std::size_t id[3];
    for (int d = 0; d < 3; ++d) {
      const auto& ax = table->axes[d];
      id[d] = static_cast<std::size_t>(std::lower_bound(ax.begin(), ax.end(), r.x[d]) - ax.begin());
    }
    table->values[(id[0] * n2 + id[1]) * n3 + id[2]] = r.v;
  }
  for (const auto& v : table->values)
    if (std::isnan(v.real())) throw ParameterError(path + ": duplicate or missing grid node");
  TrilinearSymbol s = TrilinearSymbol::from_function(
      [table](double a, double b, double c) { return (*table)(a, b, c); }, "table:" + path);
  s.declared_smoothness = 0;
  return s;
}

namespace {

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Mixed central difference of multi-index alpha with step h.
cplx mixed_difference(const TrilinearSymbol& c, const double x[3], const int alpha[3], double h) {
  cplx acc = 0;
  for (int i = 0; i <= alpha[0]; ++i)
    for (int j = 0; j <= alpha[1]; ++j)
      for (int k = 0; k <= alpha[2]; ++k) {
        const double w = ((i + j + k) % 2 ? -1.0 : 1.0) * binom(alpha[0], i) * binom(alpha[1], j) *
                         binom(alpha[2], k);
        acc += w * c(x[0] + (alpha[0] / 2.0 - i) * h, x[1] + (alpha[1] / 2.0 - j) * h,
                     x[2] + (alpha[2] / 2.0 - k) * h);
      }
  return acc / std::pow(h, alpha[0] + alpha[1] + alpha[2]);
}

template <class F>
auto with_point(F&& f, double a, double b, double c) {
  try {
    return f();
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << e.what() << " (at " << a << ", " << b << ", " << c << ")";
    throw EvaluationError(os.str());
  }
}

}  // namespace

HypothesisReport check_hypotheses(const TrilinearSymbol& c, double box, int n_samples, unsigned seed) {
  if (!(box > 0)) throw ParameterError("box must be positive");
  if (n_samples < 1000) throw ParameterError("n_samples must be at least 1000");
  HypothesisReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-box, box);
  const double h = 0.05;
  for (int order = 0; order <= 4; ++order) rep.h1_max_derivative_bounds[order] = 0.0;
  // Derivative stencils are costly; a tenth of the samples covers H1.
  const int n_h1 = std::max(100, n_samples / 10);
  for (int s = 0; s < n_h1; ++s) {
    const double x[3] = {U(rng), U(rng), U(rng)};
    with_point(
        [&] {
          for (int a = 0; a <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b)
              for (int d = 0; a + b + d <= 4; ++d) {
                const int alpha[3] = {a, b, d};
                const double v = std::abs(mixed_difference(c, x, alpha, h));
                double& slot = rep.h1_max_derivative_bounds[a + b + d];
                slot = std::max(slot, v);
              }
          return 0;
        },
        x[0], x[1], x[2]);
  }
  rep.h1 = true;
  for (const auto& [order, v] : rep.h1_max_derivative_bounds) rep.h1 = rep.h1 && std::isfinite(v);

  for (int s = 0; s < n_samples; ++s) {
    const double xi = U(rng), eta = U(rng);
    const cplx v = with_point([&] { return c(xi, xi, eta); }, xi, xi, eta);
    rep.h2_max_imag_on_slice = std::max(rep.h2_max_imag_on_slice, std::abs(v.imag()));
  }
  rep.h2 = rep.h2_max_imag_on_slice < 1e-10;

  rep.h3_min_diagonal = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    const double xi = -box + 2 * box * s / (n_samples - 1);
    const cplx v = with_point([&] { return c(xi, xi, xi); }, xi, xi, xi);
    rep.h3_min_diagonal = std::min(rep.h3_min_diagonal, v.real());
  }
  rep.h3 = rep.h3_min_diagonal > 0;
  return rep;
}

TrilinearSymbol galilean_shift(const TrilinearSymbol& c, double k) {
  if (k == 0 || c.is_constant()) return c;
  std::ostringstream os;
  os.precision(17);
  os << "shift(" << k << "):" << c.spec();
  TrilinearSymbol s = TrilinearSymbol::from_function(
      [c, k](double a, double b, double d) { return c(a - k, b - k, d - k); }, os.str());
  s.name = c.name;
  s.declared_smoothness = c.declared_smoothness;
  s.declared_hypotheses = c.declared_hypotheses;
  return s;
}

QuarticSymbol quartic_mass_symbol(const TrilinearSymbol& c) {
  if (c.is_constant() && c.constant_value().imag() == 0) return QuarticSymbol{nullptr, QuarticTag::Mass, true};
  return QuarticSymbol{[c](const Quad& x) {
                         return 0.5 * kI *
                                (-c(x[0], x[1], x[2]) - c(x[0], x[3], x[2]) +
                                 std::conj(c(x[1], x[2], x[3])) + std::conj(c(x[1], x[0], x[3])));
                       },
                       QuarticTag::Mass};
}

namespace {

template <class Weight>
QuarticSymbol localized(const TrilinearSymbol& c, Weight w, QuarticTag tag) {
  return QuarticSymbol{[c, w](const Quad& x) {
                         const cplx s = c(x[0], x[1], x[2]) * w(x[0] - x[1] + x[2], x[3]) +
                                        c(x[0], x[3], x[2]) * w(x[0] - x[3] + x[2], x[1]) -
                                        std::conj(c(x[1], x[2], x[3])) * w(x[0], x[1] - x[2] + x[3]) -
                                        std::conj(c(x[1], x[0], x[3])) * w(x[2], x[1] - x[0] + x[3]);
                         return -0.5 * kI * s;
                       },
                       tag};
}

}  // namespace

QuarticSymbol quartic_mass_symbol(const TrilinearSymbol& c, const Localizer& a) {
  if (a.identity && a.amplitude == 1.0) return quartic_mass_symbol(c);
  if (c.is_zero()) return QuarticSymbol{nullptr, QuarticTag::Mass, true};
  return localized(c, [a](double s, double t) { return a.a(s, t); }, QuarticTag::Mass);
}

QuarticSymbol quartic_momentum_symbol(const TrilinearSymbol& c, const Localizer& a, double xi0) {
  if (c.is_zero()) return QuarticSymbol{nullptr, QuarticTag::Momentum, true};
  return localized(c, [a, xi0](double s, double t) { return (-s - t + 2 * xi0) * a.a(s, t); },
                   QuarticTag::Momentum);
}

double smooth_step(double t) {
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  const double f0 = std::exp(-1.0 / (1.0 - t));
  const double f1 = std::exp(-1.0 / t);
  return f0 / (f0 + f1);
}

std::array<double, 3> region_weights(double eta1, double d_med, const ResonanceThresholds& th) {
  const double w1 = smooth_step((d_med - th.core) / th.core);
  if (w1 == 1.0) return {1.0, 0.0, 0.0};
  // Here d_med > core, so the ratio is finite.
  const double g = smooth_step((1.0 + std::abs(eta1)) / (th.theta * d_med) - 1.0);
  return {w1, (1 - w1) * g, (1 - w1) * (1 - g)};
}

double division_scale(double eta1, double eta2, double eta3) {
  return std::max(std::abs(eta1), std::min(std::abs(eta2), std::abs(eta3)));
}

ResonancePoint resonance(const Quad& x, const ResonanceThresholds& th) {
  ResonancePoint p;
  p.xi = x;
  p.eta = eta_from_xi(x);
  p.delta4 = p.eta[0];
  p.delta4_sq = x[0] * x[0] - x[1] * x[1] + x[2] * x[2] - x[3] * x[3];
  p.tilde_delta4_sq = 0.5 * ((x[0] - x[2]) * (x[0] - x[2]) - (x[1] - x[3]) * (x[1] - x[3]));
  const double s1 = std::abs(x[0] - x[1]) + std::abs(x[2] - x[3]);
  const double s2 = std::abs(x[0] - x[3]) + std::abs(x[2] - x[1]);
  p.d_hi = std::max(s1, s2);
  p.d_med = std::min(s1, s2);
  p.region_weights = region_weights(p.delta4, division_scale(p.eta[0], p.eta[1], p.eta[2]), th);
  return p;
}

}  // namespace nlslab
