#include "nlslab/report.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace nlslab {

using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string save_trajectory(const std::string& dir, const std::string& name, const Trajectory& tr) {
  std::filesystem::create_directories(dir);
  const std::string bin = name + ".bin";
  {
    std::ofstream out(std::filesystem::path(dir) / bin, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + bin);
    for (const auto& st : tr.states) out.write(reinterpret_cast<const char*>(st.data()), st.size() * sizeof(cplx));
  }
  const GridSpec& g = tr.space.grid;
  json m;
  m["grid"] = {{"num_points", g.num_points}, {"circumference", g.circumference}, {"dt", g.dt},
               {"horizon", g.horizon}, {"k_max", g.k_max}};
  m["band"] = {tr.space.band.lo, tr.space.band.hi};
  m["dt"] = tr.dt;
  m["eps"] = tr.eps;
  m["times"] = tr.times;
  m["states"] = bin;
  m["layout"] = "snapshot-major, complex128 band coefficients";
  m["warnings"] = tr.warnings;
  m["aborted"] = tr.aborted;
  if (tr.aborted) m["abort_reason"] = tr.abort_reason;
  const auto path = (std::filesystem::path(dir) / (name + ".json")).string();
  std::ofstream(path) << m.dump(2) << '\n';
  return path;
}

Trajectory load_trajectory(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ParameterError("cannot read " + manifest_path);
  const json m = json::parse(in);
  Trajectory tr;
  GridSpec& g = tr.space.grid;
  g.num_points = m["grid"]["num_points"];
  g.circumference = m["grid"]["circumference"];
  g.dt = m["grid"]["dt"];
  g.horizon = m["grid"]["horizon"];
  g.k_max = m["grid"]["k_max"];
  tr.space.band = Band{m["band"][0].get<int>(), m["band"][1].get<int>()};
  tr.dt = m["dt"];
  tr.eps = m["eps"];
  tr.times = m["times"].get<std::vector<double>>();
  tr.warnings = m["warnings"].get<std::vector<std::string>>();
  tr.aborted = m.value("aborted", false);
  const auto bin = std::filesystem::path(manifest_path).parent_path() / m["states"].get<std::string>();
  std::ifstream b(bin, std::ios::binary);
  if (!b) throw ParameterError("missing state file " + bin.string());
  const int n = tr.space.n();
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    CVec st(n);
    b.read(reinterpret_cast<char*>(st.data()), n * sizeof(cplx));
    if (!b) throw ParameterError("state file truncated: " + bin.string());
    tr.states.push_back(std::move(st));
  }
  return tr;
}

std::string RunRecord::to_json() const {
  json j;
  j["config_hash"] = config_hash;
  j["code_version"] = code_version;
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  j["timings"] = timings;
  j["artifacts"] = artifacts;
  j["warnings"] = warnings;
  return j.dump(2);
}

std::string write_artifact(const std::string& dir, const std::string& name, const std::string& text,
                           RunRecord* record) {
  std::filesystem::create_directories(dir);
  const auto path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path);
  out << text;
  if (record) record->artifacts.push_back(name);
  return path;
}

}  // namespace nlslab
