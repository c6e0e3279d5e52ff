#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nlslab/solver.hpp"

namespace nlslab {

inline constexpr const char* kCodeVersion = "0.1.0";

// FNV-1a 64-bit, hex.
std::string fnv1a_hex(const std::string& bytes);

// Binary state dump (<name>.bin, little-endian doubles) plus a JSON manifest
// (<name>.json). Returns the manifest path.
std::string save_trajectory(const std::string& dir, const std::string& name, const Trajectory& tr);
Trajectory load_trajectory(const std::string& manifest_path);

struct RunRecord {
  std::string config_hash;
  std::string code_version = kCodeVersion;
  std::string subcommand;
  std::uint64_t seed = 0;
  std::map<std::string, double> timings;  // seconds
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;
  std::string to_json() const;
};

// Writes text to dir/name, records the path and returns it.
std::string write_artifact(const std::string& dir, const std::string& name, const std::string& text,
                           RunRecord* record = nullptr);

}  // namespace nlslab
