#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/data.hpp"
#include "nlslab/solver.hpp"
#include "nlslab/symbol.hpp"

namespace nlslab::cli {

// Schema or syntax problem; the message names the field or line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FluxSection {
  std::vector<int> bins{0};
  std::vector<double> xi0{0.0};
  bool xi0_at_bin = false;  // also run xi0 = k for each bin
  double t = 0.5;
};

struct MorawetzSection {
  std::vector<std::array<int, 2>> pairs{{0, 0}};
  std::vector<double> x0{0.0};
  double xi0 = 0.0;
  double t_from = 0.2, t_to = 0.4;
  std::vector<int> strides{4, 2, 1};
};

struct NormsSection {
  std::vector<int> bins{-1, 0, 1};
  std::vector<double> x0{0.0};
};

struct SweepSection {
  std::vector<double> eps{0.2, 0.1, 0.05};
  double t_star = 0.5;
  double dt = 1e-3;
  bool localized = false;  // a = unit bin when set, a == 1 otherwise
  int bin = 0;
  double xi0 = 0.0;
  bool control = true;  // also run c == 1
};

struct DivisionSection {
  int samples = 10000;
  double box = 20.0;
  double xi0 = 0.0;
  bool localized = false;
  int bin = 0;
};

struct ExperimentConfig {
  std::string symbol = "1";
  std::string symbol_file;  // takes precedence over symbol
  GridSpec grid;
  double band_lo = 0, band_hi = 0;
  bool has_band = false;
  std::vector<PacketSpec> packets;
  bool random_phase = false;
  RandomPhaseSpec random;
  double eps = 0;  // rescales packet data when positive
  SolverConfig solver;
  FluxSection flux;
  MorawetzSection morawetz;
  NormsSection norms;
  SweepSection sweep;
  DivisionSection division;
  std::string output = "out";
  std::uint64_t seed = 1;
  std::string canonical;  // normalized JSON, hashed into the run record

  TrilinearSymbol make_symbol() const;
  Band band() const;
  Field initial_field() const;
  // Initial data with its norm set to eps (sweep family).
  Field initial_field(double eps) const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "config");
ExperimentConfig load_config(const std::string& path);

}  // namespace nlslab::cli
