// Run configuration: an INI file with sections [model], [basis], [stats],
// [classical], [density] and [output]; see README for the key list.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gcm/basis.hpp"
#include "gcm/classical.hpp"
#include "gcm/eigensolver.hpp"
#include "gcm/model.hpp"
#include "gcm/spectral_stats.hpp"

namespace gcm {

/// Invalid user input (bad key, malformed value, out-of-range option).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BasisConfig {
  std::vector<QuantScheme> schemes{QuantScheme::TwoDEven};
  std::size_t dimension = 2000;
  std::optional<double> a_osc;  // fixed stiffness; otherwise trace optimization
  double c_shift = 0.6;
  SpectrumOptions certification;
};

struct ClassicalConfig {
  SaliOptions sali;
  std::size_t count = 200;  // trajectories per energy
  std::vector<double> energies{0.0};
  std::vector<double> B_grid;  // freg-map rows; empty means the model's B
  std::vector<double> E_grid;  // freg-map columns; empty means `energies`
};

struct DensityConfig {
  std::vector<std::size_t> levels{0};
  std::size_t points = 201;  // grid points per axis
  double margin = 1.3;       // grid half-width over the accessible radius
};

struct OutputConfig {
  std::filesystem::path dir = "out";
  std::filesystem::path cache_dir;  // empty disables caching
  unsigned threads = 1;
};

struct RunConfig {
  ModelParams model;
  BasisConfig basis;
  StatsConfig stats;
  std::vector<double> bias_omegas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::size_t> histogram_bins;  // bins whose NNS histogram is written
  double histogram_width = 0.1;
  ClassicalConfig classical;
  DensityConfig density;
  OutputConfig output;
};

/// "section.key" -> value pairs, applied after the file is read.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Reads `path` (if non-empty), applies overrides and validates. Unknown
/// sections or keys are rejected. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});
RunConfig parse_config(const std::string& ini_text, const ConfigOverrides& overrides = {});

/// Canonical INI text: every key, fixed order, round-trip number format.
std::string to_ini(const RunConfig& config, bool include_output = true);

/// SHA-256 of the canonical text without [output] (directories and thread
/// count do not change results).
std::string config_hash(const RunConfig& config);

/// Every recognized "section.key" name.
const std::vector<std::string>& config_keys();

}  // namespace gcm
