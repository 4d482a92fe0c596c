// gcmlab: command-line driver for spectra, spacing statistics, classical
// regular fractions and densities.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "gcm/pipeline.hpp"
#include "gcm/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string config;
  std::string out;
  std::string cache_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::vector<std::string> sets;
  gcm::ConfigOverrides named;
};

// Flags that map one-to-one onto configuration keys.
struct NamedFlag {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr NamedFlag kModelFlags[] = {
    {"--A", "model.A", "quadratic coefficient"},
    {"--B", "model.B", "cubic coefficient"},
    {"--C", "model.C", "quartic coefficient"},
    {"--K", "model.K", "mass parameter"},
    {"--hbar", "model.hbar", "hbar"},
    {"--kappa", "model.kappa", "classicality hbar^2/K (sets hbar)"},
};
constexpr NamedFlag kBasisFlags[] = {
    {"--schemes", "basis.schemes", "2d-even, 2d-odd, 5d or all (comma separated)"},
    {"--dimension", "basis.dimension", "basis size"},
    {"--a-osc", "basis.a_osc", "oscillator stiffness or 'auto'"},
    {"--c-shift", "basis.c_shift", "a_osc = c_shift * trace optimum"},
};
constexpr NamedFlag kStatsFlags[] = {
    {"--bin-size", "stats.bin_size", "levels per bin"},
    {"--shift", "stats.shift", "bin shift"},
    {"--unfold-degree", "stats.unfold_degree", "unfolding polynomial degree"},
    {"--bias-trials", "stats.bias_trials", "Monte-Carlo trials for error bars"},
    {"--histogram-bins", "stats.histogram_bins", "bins whose NNS histogram is written"},
};
constexpr NamedFlag kClassicalFlags[] = {
    {"--t-max", "classical.t_max", "integration time"},
    {"--count", "classical.count", "trajectories per energy"},
    {"--energies", "classical.energies", "energies (list or start:stop:count)"},
    {"--B-grid", "classical.B_grid", "freg-map B values"},
    {"--E-grid", "classical.E_grid", "freg-map E values"},
};
constexpr NamedFlag kDensityFlags[] = {
    {"--levels", "density.levels", "level indices"},
    {"--points", "density.points", "grid points per axis"},
    {"--margin", "density.margin", "grid half-width over the accessible radius"},
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "INI configuration or a manifest.json to re-run");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--cache-dir", o.cache_dir, "spectrum cache directory");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--threads", o.threads, "worker threads");
  app->add_option("--set", o.sets, "override, section.key=value (repeatable)");
}

template <std::size_t N>
void add_named(CLI::App* app, CommonOptions& o, const NamedFlag (&flags)[N]) {
  for (const auto& f : flags) {
    const std::string key = f.key;
    app->add_option_function<std::string>(
        f.flag, [&o, key](const std::string& v) { o.named.emplace_back(key, v); }, f.help);
  }
}

gcm::RunConfig make_config(const CommonOptions& o) {
  gcm::ConfigOverrides overrides;
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw gcm::ConfigError("--set expects section.key=value");
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& n : o.named) overrides.push_back(n);
  if (o.seed) overrides.emplace_back("stats.seed", std::to_string(*o.seed));
  if (o.threads) overrides.emplace_back("output.threads", std::to_string(*o.threads));
  if (!o.out.empty()) overrides.emplace_back("output.dir", o.out);
  if (!o.cache_dir.empty()) overrides.emplace_back("output.cache_dir", o.cache_dir);

  if (o.config.size() > 5 && o.config.substr(o.config.size() - 5) == ".json") {
    std::ifstream in(o.config);
    if (!in) throw gcm::ConfigError("cannot open " + o.config);
    std::stringstream ss;
    ss << in.rdbuf();
    gcm::RunManifest m;
    try {
      m = gcm::RunManifest::from_json(ss.str());
    } catch (const std::exception& e) {
      throw gcm::ConfigError(std::string("not a run manifest: ") + e.what());
    }
    return gcm::parse_config(m.config_text, overrides);
  }
  return gcm::load_config(o.config, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral and classical chaos indicators of the geometric collective model"};
  app.set_version_flag("--version", std::string(gcm::kVersion));
  app.require_subcommand(1);

  CommonOptions o;
  std::string levels_file, brody_file, freg_file;
  gcm::CompareOptions cmp;
  std::optional<double> window_min, window_max;

  auto* spectrum = app.add_subcommand("spectrum", "diagonalize and write level lists");
  auto* brody = app.add_subcommand("brody", "Brody parameter versus energy");
  auto* classical = app.add_subcommand("classical", "regular fraction f_reg(E) at the model's B");
  auto* compare = app.add_subcommand("compare", "join 1-omega with f_reg");
  auto* density = app.add_subcommand("density", "probability densities of selected levels");
  auto* bias = app.add_subcommand("bias-study", "bias and spread of the Brody fit");
  auto* fmap = app.add_subcommand("freg-map", "f_reg on a B x E grid");

  for (auto* sub : {spectrum, brody, classical, compare, density, bias, fmap}) add_common(sub, o);
  for (auto* sub : {spectrum, brody, classical, density, fmap}) add_named(sub, o, kModelFlags);
  for (auto* sub : {spectrum, brody, density}) add_named(sub, o, kBasisFlags);
  for (auto* sub : {brody, bias}) add_named(sub, o, kStatsFlags);
  for (auto* sub : {classical, fmap}) add_named(sub, o, kClassicalFlags);
  add_named(density, o, kDensityFlags);
  brody->add_option("--levels-file", levels_file,
                    "spectrum CSV or plain list (one energy per line) instead of diagonalizing");
  compare->add_option("--brody", brody_file, "brody_*.csv")->required();
  compare->add_option("--freg", freg_file, "freg.csv")->required();
  compare->add_option("--energy-tol", cmp.energy_tol, "max energy distance of joined points");
  compare->add_option("--window-min", window_min, "correlation window lower edge");
  compare->add_option("--window-max", window_max, "correlation window upper edge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto* sub = app.get_subcommands().front();
    gcm::RunContext ctx(sub->get_name(), make_config(o));
    const std::string name = sub->get_name();
    if (name == "spectrum") {
      gcm::cmd_spectrum(ctx);
    } else if (name == "brody") {
      gcm::cmd_brody(ctx, levels_file.empty() ? std::nullopt
                                              : std::optional<std::filesystem::path>(levels_file));
    } else if (name == "classical") {
      gcm::cmd_classical(ctx);
    } else if (name == "compare") {
      cmp.window_min = window_min;
      cmp.window_max = window_max;
      const auto result = gcm::cmd_compare(ctx, brody_file, freg_file, cmp);
      fmt::print("joined points: {}\npearson: {}\n", result.points.size(), result.pearson);
    } else if (name == "density") {
      gcm::cmd_density(ctx);
    } else if (name == "bias-study") {
      gcm::cmd_bias_study(ctx);
    } else if (name == "freg-map") {
      gcm::cmd_freg_map(ctx);
    }
    const auto manifest = ctx.finish();
    fmt::print("wrote {} file(s); manifest {}\n", ctx.manifest().files.size(), manifest.string());
    return kExitOk;
  } catch (const gcm::ConfigError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const gcm::UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  }
}
