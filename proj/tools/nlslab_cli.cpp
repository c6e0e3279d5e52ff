#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "config.hpp"
#include "nlslab/division.hpp"
#include "nlslab/envelope.hpp"
#include "nlslab/metrics.hpp"
#include "nlslab/morawetz.hpp"
#include "nlslab/report.hpp"
#include "svg.hpp"

using namespace nlslab;
using namespace nlslab::cli;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kGuardError = 3, kRuntimeError = 4 };

struct Options {
  std::string config;
  std::string out;
  long seed = -1;
  int jobs = 1;
  bool figures = false;
};

struct Context {
  ExperimentConfig cfg;
  Options opt;
  RunRecord record;
  std::string dir;

  std::string stamp() const { return "config " + record.config_hash + "  nlslab " + record.code_version; }
  void write(const std::string& name, const std::string& text) { write_artifact(dir, name, text, &record); }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

Trajectory run_solver(Context& ctx, const TrilinearForm& form, SolverConfig sc) {
  const auto t0 = Clock::now();
  const Trajectory tr = simulate(band_coeffs(ctx.cfg.initial_field(), form.space().band), form, sc);
  ctx.record.timings["simulate"] += seconds_since(t0);
  ctx.record.warnings.insert(ctx.record.warnings.end(), tr.warnings.begin(), tr.warnings.end());
  if (tr.aborted) throw EvaluationError("run aborted: " + tr.abort_reason);
  return tr;
}

int cmd_simulate(Context& ctx) {
  const BandSpace s{ctx.cfg.grid, ctx.cfg.band()};
  const TrilinearForm form(ctx.cfg.make_symbol(), s, ctx.cfg.solver.trilinear);
  SolverConfig sc = ctx.cfg.solver;
  sc.band = s.band;
  const Trajectory tr = run_solver(ctx, form, sc);
  save_trajectory(ctx.dir, "trajectory", tr);
  ctx.record.artifacts.push_back("trajectory.json");
  ctx.record.artifacts.push_back("trajectory.bin");

  std::ostringstream csv;
  csv << "t,mass,max_abs\n";
  Series mass{"mass", {}, {}}, peak{"max |u|", {}, {}};
  double m0 = -1, drift = 0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    double m = 0;
    for (const auto& z : tr.states[i]) m += std::norm(z);
    m *= s.grid.circumference;
    if (m0 < 0) m0 = m;
    drift = std::max(drift, std::abs(m - m0));
    double p = 0;
    for (const auto& z : tr.field(i).samples) p = std::max(p, std::abs(z));
    csv << fmt(tr.times[i]) << ',' << fmt(m) << ',' << fmt(p) << '\n';
    mass.x.push_back(tr.times[i]);
    mass.y.push_back(m);
    peak.x.push_back(tr.times[i]);
    peak.y.push_back(p);
  }
  ctx.write("simulate.csv", csv.str());
  ctx.write("simulate.json", "{\"eps\":" + fmt(tr.eps) + ",\"snapshots\":" + std::to_string(tr.times.size()) +
                                 ",\"mass_drift\":" + fmt(drift) + ",\"modes\":" + std::to_string(s.n()) + "}\n");
  if (ctx.opt.figures) ctx.write("simulate.svg", svg_stacked_lines("mass and peak amplitude", "t", {mass, peak}, ctx.stamp()));
  std::cout << "simulated " << tr.times.size() << " snapshots, mass drift " << drift << "\n";
  return kOk;
}

int cmd_verify_division(Context& ctx) {
  const auto& d = ctx.cfg.division;
  const TrilinearSymbol c = ctx.cfg.make_symbol();
  const Localizer a = d.localized ? Localizer::unit_bin(d.bin) : Localizer::everywhere();
  std::ostringstream csv;
  csv << "kind,resonant_sup,resonant_scale,max_residual,k_b,k_r,samples,hyperplane\n";
  bool ok = true;
  for (DensityKind kind : {DensityKind::Mass, DensityKind::Momentum}) {
    const auto t0 = Clock::now();
    const LocalizedDivision ld = localized_division(c, a, d.xi0, kind);
    const ResonantSup rs = resonant_sup(ld.c4, d.box);
    const DivisionBounds b = ld.is_zero() ? DivisionBounds{0, 0, 0, d.samples}
                                          : fit_division_bounds(ld.pair, d.box, d.samples, static_cast<unsigned>(ctx.cfg.seed));
    ctx.record.timings[kind == DensityKind::Mass ? "division_mass" : "division_momentum"] = seconds_since(t0);
    ctx.record.warnings.insert(ctx.record.warnings.end(), ld.warnings.begin(), ld.warnings.end());
    const char* name = kind == DensityKind::Mass ? "mass" : "momentum";
    csv << name << ',' << fmt(rs.value) << ',' << fmt(rs.scale) << ',' << fmt(b.max_residual) << ',' << fmt(b.k_b)
        << ',' << fmt(b.k_r) << ',' << b.samples << ',' << (ld.is_zero() ? 0 : ld.pair.divides_on_hyperplane()) << '\n';
    const bool pass = rs.value <= 1e-10 * rs.scale && b.max_residual < 1e-6 && std::isfinite(b.k_b) &&
                      std::isfinite(b.k_r);
    ok = ok && pass;
    std::cout << name << ": resonant sup " << rs.value << ", division residual " << b.max_residual << ", K_b "
              << b.k_b << ", K_r " << b.k_r << (pass ? "" : "  (FAILED)") << "\n";
  }
  ctx.write("division.csv", csv.str());
  return ok ? kOk : kCheckFailed;
}

int cmd_verify_flux(Context& ctx) {
  const auto& f = ctx.cfg.flux;
  const TrilinearSymbol c = ctx.cfg.make_symbol();
  const BandSpace s{ctx.cfg.grid, ctx.cfg.band()};
  const TrilinearForm form(c, s, ctx.cfg.solver.trilinear);
  std::vector<FluxResidual> rows;
  bool ok = true;
  for (double dt : {ctx.cfg.solver.dt, ctx.cfg.solver.dt / 2}) {
    SolverConfig sc = ctx.cfg.solver;
    sc.band = s.band;
    sc.dt = dt;
    sc.horizon = std::max(sc.horizon, f.t + 3 * dt);
    sc.snapshot_every = sc.horizon;
    sc.dense = true;
    sc.dense_from = f.t - 3 * dt;
    sc.dense_to = f.t + 3 * dt;
    const Trajectory tr = run_solver(ctx, form, sc);
    for (int k : f.bins) {
      std::vector<double> xi0s = f.xi0;
      if (f.xi0_at_bin) xi0s.push_back(k);
      for (double xi0 : xi0s) {
        const auto t0 = Clock::now();
        const Corrections corr = build_corrections(c, Localizer::unit_bin(k), xi0, s);
        ctx.record.timings["corrections"] += seconds_since(t0);
        FluxResidual r = flux_residual(tr, corr, form, f.t);
        rows.push_back(r);
        if (dt < ctx.cfg.solver.dt) ok = ok && r.mass_relative < 1e-6 && r.momentum_relative < 1e-6;
      }
    }
  }
  std::ostringstream csv;
  write_flux_csv(csv, rows);
  ctx.write("flux.csv", csv.str());
  double worst = 0;
  for (const auto& r : rows) worst = std::max({worst, r.mass_relative, r.momentum_relative});
  std::cout << rows.size() << " flux checks, worst relative residual " << worst << (ok ? "" : "  (FAILED)") << "\n";
  return ok ? kOk : kCheckFailed;
}

int cmd_morawetz(Context& ctx) {
  const auto& m = ctx.cfg.morawetz;
  const TrilinearSymbol c = ctx.cfg.make_symbol();
  const BandSpace s{ctx.cfg.grid, ctx.cfg.band()};
  const TrilinearForm form(c, s, ctx.cfg.solver.trilinear);
  SolverConfig sc = ctx.cfg.solver;
  sc.band = s.band;
  sc.horizon = std::max(sc.horizon, m.t_to);
  sc.snapshot_every = sc.horizon;
  sc.dense = true;
  sc.dense_from = m.t_from;
  sc.dense_to = m.t_to;
  const Trajectory tr = run_solver(ctx, form, sc);
  const int last = static_cast<int>(tr.dense_states.size()) - 1;
  const int widest = *std::max_element(m.strides.begin(), m.strides.end());

  std::ostringstream summary;
  summary << std::setprecision(12) << "[";
  bool first_entry = true, ok = true;
  for (const auto& p : m.pairs) {
    const auto t0 = Clock::now();
    const Corrections ka = build_corrections(c, Localizer::unit_bin(p[0]), m.xi0, s);
    const Corrections kb = p[1] == p[0] ? ka : build_corrections(c, Localizer::unit_bin(p[1]), m.xi0, s);
    ctx.record.timings["corrections"] += seconds_since(t0);
    for (double x0 : m.x0) {
      const std::string tag = "morawetz_" + std::to_string(p[0]) + "_" + std::to_string(p[1]) + "_x0_" + fmt(x0);
      InteractionReport finest;
      std::vector<double> res;
      for (int st : m.strides) {
        // Same centre points for every stride.
        const InteractionReport r = interaction_transversal(tr, ka, p[1] == p[0] ? ka : kb, &form, x0,
                                                            widest - st, last - widest + st, st);
        res.push_back(r.residual_max);
        if (st == *std::min_element(m.strides.begin(), m.strides.end())) finest = r;
      }
      ok = ok && finest.j4_min >= -1e-12;
      std::ostringstream csv;
      write_interaction_csv(csv, finest);
      ctx.write(tag + ".csv", csv.str());
      summary << (first_entry ? "" : ",") << "{\"a\":" << p[0] << ",\"b\":" << p[1] << ",\"report\":"
              << interaction_summary_json(finest) << ",\"strides\":[";
      for (std::size_t i = 0; i < m.strides.size(); ++i) summary << (i ? "," : "") << m.strides[i];
      summary << "],\"residual_by_stride\":[";
      for (std::size_t i = 0; i < res.size(); ++i) summary << (i ? "," : "") << res[i];
      summary << "]}";
      first_entry = false;
      ctx.record.warnings.insert(ctx.record.warnings.end(), finest.warnings.begin(), finest.warnings.end());
      if (ctx.opt.figures) {
        auto series = [&](const char* name, const std::vector<double>& y) { return Series{name, finest.t, y}; };
        ctx.write(tag + ".svg",
                  svg_stacked_lines("interaction functional, bins " + std::to_string(p[0]) + "/" +
                                        std::to_string(p[1]) + ", x0 = " + fmt(x0),
                                    "t",
                                    {series("I", finest.I), series("J4", finest.J4), series("J6", finest.J6),
                                     series("J8", finest.J8), series("K8", finest.K8),
                                     series("residual", finest.residual)},
                                    ctx.stamp()));
      }
      std::cout << tag << ": residual " << finest.residual_max << " of scale " << finest.scale << "\n";
    }
  }
  summary << "]\n";
  ctx.write("morawetz.json", summary.str());
  return ok ? kOk : kCheckFailed;
}

int cmd_envelope(Context& ctx) {
  const Field u = ctx.cfg.initial_field();
  const double eps = u.norm();
  int kmax = 1;
  for (const auto& p : ctx.cfg.packets) kmax = std::max(kmax, static_cast<int>(std::ceil(std::abs(p.carrier))) + 2);
  for (int k : ctx.cfg.random.bins) kmax = std::max(kmax, std::abs(k) + 2);
  const Envelope env = envelope_of(u, eps, UnitPartition{kmax});
  std::ostringstream csv;
  write_envelope_csv(csv, env);
  ctx.write("envelope.csv", csv.str());
  std::cout << "envelope over |k| <= " << kmax << ", norm " << env.norm() << (env.degenerate ? " (degenerate)" : "")
            << "\n";
  return kOk;
}

int cmd_norms(Context& ctx) {
  const TrilinearSymbol c = ctx.cfg.make_symbol();
  const BandSpace s{ctx.cfg.grid, ctx.cfg.band()};
  const TrilinearForm form(c, s, ctx.cfg.solver.trilinear);
  SolverConfig sc = ctx.cfg.solver;
  sc.band = s.band;
  sc.snapshot_every = std::min(sc.snapshot_every, 0.1);
  const Trajectory tr = run_solver(ctx, form, sc);
  const Field u0 = ctx.cfg.initial_field();
  const double eps = u0.norm();
  int kmax = 1;
  for (int k : ctx.cfg.norms.bins) kmax = std::max(kmax, std::abs(k) + 1);
  const Envelope env = envelope_of(u0, eps, UnitPartition{kmax});
  const auto t0 = Clock::now();
  const NormReport r = norms(tr, ctx.cfg.norms.bins, env, eps, ctx.cfg.norms.x0);
  const GlobalBounds g = global_bounds(tr, eps, ctx.cfg.norms.x0);
  ctx.record.timings["norms"] = seconds_since(t0);
  std::ostringstream per_bin, pairs;
  write_norms_csv(per_bin, pairs, r);
  ctx.write("norms_bins.csv", per_bin.str());
  ctx.write("norms_pairs.csv", pairs.str());
  ctx.write("norms.json", norms_summary_json(r, g) + "\n");
  if (ctx.opt.figures) {
    const double x0 = ctx.cfg.norms.x0.empty() ? 0.0 : ctx.cfg.norms.x0.front();
    std::vector<std::vector<double>> table(r.bins.size(), std::vector<double>(r.bins.size(), std::nan("")));
    for (const auto& e : r.bilinear) {
      if (e.x0 != x0) continue;
      const auto i = std::find(r.bins.begin(), r.bins.end(), e.k1) - r.bins.begin();
      const auto j = std::find(r.bins.begin(), r.bins.end(), e.k2) - r.bins.begin();
      table[i][j] = e.ratio;
    }
    ctx.write("norms_ratio.svg", svg_heatmap("bilinear ratio, x0 = " + fmt(x0), r.bins, r.bins, table, ctx.stamp()));
  }
  std::cout << "norm tables for " << r.bins.size() << " bins" << (r.finite() ? "" : " (non-finite entries)") << "\n";
  return r.finite() ? kOk : kCheckFailed;
}

int cmd_sweep(Context& ctx) {
  const auto& w = ctx.cfg.sweep;
  ScalingConfig sc;
  sc.grid = ctx.cfg.grid;
  sc.band = ctx.cfg.band();
  sc.a = w.localized ? Localizer::unit_bin(w.bin) : Localizer::everywhere();
  sc.xi0 = w.xi0;
  sc.dt = w.dt;
  sc.t_star = w.t_star;
  const ExperimentConfig& cfg = ctx.cfg;
  auto family = [&cfg](double eps) { return cfg.initial_field(eps); };

  struct Member {
    std::string name;
    TrilinearSymbol symbol;
    ScalingReport report;
    std::string error;
    double seconds = 0;
  };
  std::vector<Member> members{{"symbol", cfg.make_symbol(), {}, {}, 0}};
  if (w.control) members.push_back({"control", parse_symbol("1"), {}, {}, 0});

  // Members are independent; each worker owns one slot.
  auto work = [&](Member& m) {
    const auto t0 = Clock::now();
    try {
      m.report = scaling_study(m.symbol, family, w.eps, sc);
    } catch (const std::exception& e) {
      m.error = e.what();
    }
    m.seconds = seconds_since(t0);
  };
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, ctx.opt.jobs));
  for (std::size_t i = 0; i < members.size(); i += jobs) {
    std::vector<std::thread> pool;
    for (std::size_t j = i; j < std::min(members.size(), i + jobs); ++j) pool.emplace_back(work, std::ref(members[j]));
    for (auto& t : pool) t.join();
  }
  for (const auto& m : members) {
    if (!m.error.empty()) throw EvaluationError(m.name + ": " + m.error);
    ctx.record.timings["sweep_" + m.name] = m.seconds;
  }

  const ScalingReport& r = members[0].report;
  std::ostringstream csv;
  write_scaling_csv(csv, r);
  ctx.write("sweep.csv", csv.str());
  std::ostringstream pts;
  pts << "member,eps,raw_drift,modified_drift,raw_formula,modified_formula\n";
  for (const auto& m : members)
    for (std::size_t i = 0; i < m.report.eps.size(); ++i)
      pts << m.name << ',' << fmt(m.report.eps[i]) << ',' << fmt(m.report.raw_drift[i]) << ','
          << fmt(m.report.modified_drift[i]) << ',' << fmt(m.report.raw_formula[i]) << ','
          << fmt(m.report.modified_formula[i]) << '\n';
  ctx.write("sweep_points.csv", pts.str());
  if (w.control) {
    std::ostringstream ctl;
    write_scaling_csv(ctl, members[1].report);
    ctx.write("sweep_control.csv", ctl.str());
  }
  if (ctx.opt.figures)
    ctx.write("sweep.svg", svg_loglog("mass drift against eps", "eps", "|d/dt mass|",
                                      {Series{"raw", r.eps, r.raw_drift}, Series{"modified", r.eps, r.modified_drift}},
                                      {r.raw.slope, r.modified.slope}, ctx.stamp()));
  std::cout << "raw slope " << r.raw.slope << " +- " << r.raw.ci95 << ", modified slope " << r.modified.slope
            << " +- " << r.modified.ci95 << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlslab: cubic dispersive equations with trilinear multiplier nonlinearities"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "output directory (overrides the config)");
  app.add_option("--seed", opt.seed, "random seed (overrides the config)")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", opt.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--figures", opt.figures, "also write SVG figures");

  const std::vector<std::pair<std::string, std::function<int(Context&)>>> commands = {
      {"simulate", cmd_simulate},   {"verify-division", cmd_verify_division},
      {"verify-flux", cmd_verify_flux}, {"morawetz", cmd_morawetz},
      {"envelope", cmd_envelope},   {"norms", cmd_norms},
      {"sweep", cmd_sweep}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name, "run the " + name + " pipeline");

  CLI11_PARSE(app, argc, argv);

  Context ctx;
  ctx.opt = opt;
  std::string name = app.get_subcommands().front()->get_name();
  try {
    ctx.cfg = opt.config.empty() ? parse_config("{}", "defaults") : load_config(opt.config);
    if (opt.seed >= 0) ctx.cfg.seed = static_cast<std::uint64_t>(opt.seed);
    ctx.dir = opt.out.empty() ? ctx.cfg.output : opt.out;
    std::filesystem::create_directories(ctx.dir);
    ctx.record.subcommand = name;
    ctx.record.seed = ctx.cfg.seed;
    ctx.record.config_hash = fnv1a_hex(ctx.cfg.canonical + "#seed=" + std::to_string(ctx.cfg.seed));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }

  int status = kOk;
  const auto t0 = Clock::now();
  try {
    for (const auto& [n, fn] : commands)
      if (n == name) status = fn(ctx);
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\nhint: shrink the horizon or dt, or enlarge the circumference\n";
    status = kGuardError;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    status = kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "symbol error: " << e.what() << "\n";
    status = kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    status = kRuntimeError;
  }
  ctx.record.timings["total"] = seconds_since(t0);
  try {
    write_artifact(ctx.dir, "run.json", ctx.record.to_json() + "\n");
  } catch (const std::exception& e) {
    std::cerr << "cannot write run record: " << e.what() << "\n";
    if (status == kOk) status = kRuntimeError;
  }
  return status;
}
