// Command orchestration: each cmd_* reads a RunConfig, runs the stages,
// writes CSV/PGM outputs and a manifest.json into config.output.dir.
#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcm/compare.hpp"
#include "gcm/config.hpp"
#include "gcm/eigensolver.hpp"
#include "gcm/io.hpp"

namespace gcm {

/// Failure inside a computational stage; what() starts with "[stage] ".
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Invalid command-line input detected by a command (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ManifestFile {
  std::string path;  // relative to the output directory
  std::string sha256;
};

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string version;
  std::string config_text;
  std::vector<StageTiming> stages;
  std::vector<ManifestFile> files;
  std::vector<std::string> cache_hits;
  std::vector<std::string> cache_misses;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

/// Shared per-command state: timing, output registration and metadata.
class RunContext {
 public:
  RunContext(std::string command, RunConfig config);

  const RunConfig& config() const { return config_; }
  const RunManifest& manifest() const { return manifest_; }
  RunManifest& manifest() { return manifest_; }

  /// Metadata lines for CSV headers (command, version, config hash).
  Metadata metadata() const;
  std::filesystem::path output_path(const std::string& name) const;
  /// Hashes an emitted file into the manifest.
  void record(const std::filesystem::path& path);

  /// Runs fn, timing it and wrapping non-usage failures in StageError.
  template <class Fn>
  auto stage(const std::string& name, Fn&& fn) -> decltype(fn());

  /// Writes manifest.json; returns its path.
  std::filesystem::path finish();

 private:
  void add_timing(const std::string& name, double seconds);

  RunConfig config_;
  RunManifest manifest_;
};

/// Basis for a scheme: fixed a_osc from the config or the trace optimum
/// times c_shift.
BasisSpec resolve_basis(const RunConfig& config, QuantScheme scheme);

/// Cache key of a spectrum: hash of the inputs the eigensolve depends on.
std::string spectrum_cache_key(const RunConfig& config, QuantScheme scheme);

/// Spectrum of one scheme, served from output.cache_dir when possible.
Spectrum obtain_spectrum(RunContext& ctx, QuantScheme scheme);

void cmd_spectrum(RunContext& ctx);
/// From a level file when given, otherwise from the configured spectra.
void cmd_brody(RunContext& ctx, const std::optional<std::filesystem::path>& levels_file = {});
void cmd_classical(RunContext& ctx);
void cmd_freg_map(RunContext& ctx);
void cmd_bias_study(RunContext& ctx);
void cmd_density(RunContext& ctx);
Comparison cmd_compare(RunContext& ctx, const std::filesystem::path& brody_file,
                       const std::filesystem::path& freg_file, const CompareOptions& options);

template <class Fn>
auto RunContext::stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  struct Timer {
    RunContext* ctx;
    std::string name;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    ~Timer() {
      ctx->add_timing(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                                .count());
    }
  } timer{this, name};
  try {
    return fn();
  } catch (const UsageError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace gcm
