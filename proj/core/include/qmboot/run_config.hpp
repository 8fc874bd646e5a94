#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmboot/spectra.hpp"

namespace qmboot {

struct BoxOverride {
  std::string dim;
  double lo = 0.0, hi = 0.0;
};

// One resolved run. Precedence is defaults < config file < flags; the CLI
// loads the file first and then lets flags overwrite fields. Serialization
// is normalized (sorted keys, couplings always as g_list) so equal configs
// hash equally.
struct RunConfig {
  int n = 2;
  std::vector<double> g_values = {1.0};
  BasisSpec basis{8, 3, 0};  // depth 0 = choose from the potential degree
  double tol = 1e-9;
  int refine_levels = 3;
  int grid_points = 9;
  double profile_step = 0.15;
  int workers = 0;
  std::vector<BoxOverride> boxes;
  std::vector<std::pair<std::string, int>> grid;
  std::string out_dir = ".";
  int format_version = 1;
};

bool operator==(const RunConfig& a, const RunConfig& b);

RunConfig parse_config_json(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

// FNV-1a over the normalized serialization; embedded in every output header.
std::uint64_t config_hash(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

SolveConfig to_solve_config(const RunConfig& cfg);

// Flag grammars: --box E=0:10 and --grid E=51.
BoxOverride parse_box_flag(const std::string& text);
std::pair<std::string, int> parse_grid_flag(const std::string& text);

}  // namespace qmboot
