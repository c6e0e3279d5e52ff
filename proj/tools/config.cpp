#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nlslab::cli {

using json = nlohmann::json;

namespace {

// Walks one JSON object, remembering the dotted path for diagnostics and
// rejecting keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("field '" + where(key) + "': " + what);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  double number(const std::string& key, double def, double lo = -1e300, double hi = 1e300) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(key, "expected a number, got " + v.dump());
    const double x = v.get<double>();
    if (x < lo || x > hi) fail(key, "value " + v.dump() + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    return x;
  }

  long integer(const std::string& key, long def, long lo = -(1L << 40), long hi = 1L << 40) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer, got " + v.dump());
    const long x = v.get<long>();
    if (x < lo || x > hi) fail(key, "value " + v.dump() + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(key, "expected true or false, got " + v.dump());
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(key, "expected a string, got " + v.dump());
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> def, std::size_t min_size = 0) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(key + "[" + std::to_string(i) + "]", "expected a number, got " + v[i].dump());
      out.push_back(v[i].get<double>());
    }
    if (out.size() < min_size) fail(key, "needs at least " + std::to_string(min_size) + " entries");
    return out;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> def) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array()) fail(key, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer())
        fail(key + "[" + std::to_string(i) + "]", "expected an integer, got " + v[i].dump());
      out.push_back(v[i].get<int>());
    }
    return out;
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, where(key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown field");
  }

 private:
  static std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    const auto p = msg.find("syntax error");
    throw ConfigError(origin + ": " + line_col(text, e.byte) + ": " + (p == std::string::npos ? msg : msg.substr(p)));
  }

  ExperimentConfig c;
  Section top(root, "");
  c.symbol = top.string("symbol", c.symbol);
  c.symbol_file = top.string("symbol_file", "");
  if (!c.symbol_file.empty() && !std::filesystem::exists(c.symbol_file))
    top.fail("symbol_file", "no such file: " + c.symbol_file);
  c.output = top.string("output", c.output);
  c.seed = static_cast<std::uint64_t>(top.integer("seed", 1, 0));
  c.eps = top.number("eps", 0.0, 0.0);

  {
    Section g = top.child("grid");
    c.grid.num_points = static_cast<int>(g.integer("num_points", 1024, 8, 1 << 22));
    if (c.grid.num_points % 2) g.fail("num_points", "must be even");
    c.grid.circumference = g.number("circumference", 64.0, 1e-6);
    g.finish();
  }
  if (top.has("band")) {
    const auto b = top.numbers("band", {}, 2);
    if (b.size() != 2 || !(b[0] < b[1])) top.fail("band", "expected [lo, hi] with lo < hi");
    c.band_lo = b[0];
    c.band_hi = b[1];
    c.has_band = true;
  }

  {
    Section d = top.child("data");
    if (d.has("packets")) {
      const json& arr = d.raw("packets");
      if (!arr.is_array() || arr.empty()) d.fail("packets", "expected a non-empty array of packets");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Section p(arr[i], d.where("packets[" + std::to_string(i) + "]"));
        PacketSpec s;
        s.amplitude = p.number("amplitude", s.amplitude);
        s.center = p.number("center", s.center);
        s.width = p.number("width", s.width, 1e-6);
        s.carrier = p.number("carrier", s.carrier);
        p.finish();
        c.packets.push_back(s);
      }
    }
    if (d.has("random_phase")) {
      if (!c.packets.empty()) d.fail("random_phase", "give either packets or random_phase, not both");
      Section r = d.child("random_phase");
      c.random_phase = true;
      c.random.bins = r.integers("bins", {0});
      if (c.random.bins.empty()) r.fail("bins", "needs at least one bin");
      c.random.eps = r.number("eps", c.random.eps, 1e-300);
      c.random.width = r.number("width", c.random.width, 1e-6);
      c.random.spread = r.number("spread", c.random.spread, 0.0);
      r.finish();
    }
    d.finish();
    if (c.packets.empty() && !c.random_phase) c.packets.push_back(PacketSpec{});
  }

  {
    Section s = top.child("solver");
    c.solver.dt = s.number("dt", c.solver.dt, 1e-12);
    c.solver.horizon = s.number("horizon", 1.0, 0.0);
    c.solver.snapshot_every = s.number("snapshot_every", c.solver.snapshot_every, 1e-12);
    c.solver.enforce_guards = s.boolean("enforce_guards", true);
    s.finish();
  }
  {
    Section f = top.child("flux");
    c.flux.bins = f.integers("bins", c.flux.bins);
    c.flux.xi0 = f.numbers("xi0", c.flux.xi0);
    c.flux.xi0_at_bin = f.boolean("xi0_at_bin", c.flux.xi0_at_bin);
    c.flux.t = f.number("t", c.flux.t, 0.0);
    f.finish();
  }
  {
    Section m = top.child("morawetz");
    if (m.has("pairs")) {
      const json& arr = m.raw("pairs");
      if (!arr.is_array() || arr.empty()) m.fail("pairs", "expected a non-empty array of [k1, k2]");
      c.morawetz.pairs.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& p = arr[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
          m.fail("pairs[" + std::to_string(i) + "]", "expected [k1, k2], got " + p.dump());
        c.morawetz.pairs.push_back({p[0].get<int>(), p[1].get<int>()});
      }
    }
    c.morawetz.x0 = m.numbers("x0", c.morawetz.x0, 1);
    c.morawetz.xi0 = m.number("xi0", c.morawetz.xi0);
    c.morawetz.t_from = m.number("t_from", c.morawetz.t_from, 0.0);
    c.morawetz.t_to = m.number("t_to", c.morawetz.t_to, 0.0);
    if (c.morawetz.t_to <= c.morawetz.t_from) m.fail("t_to", "must exceed t_from");
    c.morawetz.strides = m.integers("strides", c.morawetz.strides);
    for (int s : c.morawetz.strides)
      if (s < 1) m.fail("strides", "entries must be positive");
    m.finish();
  }
  {
    Section n = top.child("norms");
    c.norms.bins = n.integers("bins", c.norms.bins);
    c.norms.x0 = n.numbers("x0", c.norms.x0);
    n.finish();
  }
  {
    Section s = top.child("sweep");
    c.sweep.eps = s.numbers("eps", c.sweep.eps, 3);
    for (double e : c.sweep.eps)
      if (!(e > 0)) s.fail("eps", "entries must be positive");
    c.sweep.t_star = s.number("t_star", c.sweep.t_star, 1e-9);
    c.sweep.dt = s.number("dt", c.sweep.dt, 1e-12);
    c.sweep.localized = s.has("bin");
    c.sweep.bin = static_cast<int>(s.integer("bin", 0));
    c.sweep.xi0 = s.number("xi0", c.sweep.xi0);
    c.sweep.control = s.boolean("control", c.sweep.control);
    s.finish();
  }
  {
    Section d = top.child("division");
    c.division.samples = static_cast<int>(d.integer("samples", c.division.samples, 1, 10000000));
    c.division.box = d.number("box", c.division.box, 1e-9);
    c.division.xi0 = d.number("xi0", c.division.xi0);
    c.division.localized = d.has("bin");
    c.division.bin = static_cast<int>(d.integer("bin", 0));
    d.finish();
  }
  top.finish();

  c.canonical = root.dump();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

TrilinearSymbol ExperimentConfig::make_symbol() const {
  return symbol_file.empty() ? parse_symbol(symbol) : load_symbol_file(symbol_file);
}

Band ExperimentConfig::band() const { return has_band ? band_for(grid, band_lo, band_hi) : default_band(grid); }

Field ExperimentConfig::initial_field() const {
  if (random_phase) {
    RandomPhaseSpec r = random;
    r.seed = seed;
    return random_phase_field(grid, r);
  }
  const Field u = packet_field(grid, packets);
  return eps > 0 ? with_norm(u, eps) : u;
}

Field ExperimentConfig::initial_field(double e) const { return with_norm(initial_field(), e); }

}  // namespace nlslab::cli
