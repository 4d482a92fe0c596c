#include "gcm/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>

#include "gcm/density.hpp"
#include "gcm/hamiltonian.hpp"
#include "gcm/hashing.hpp"
#include "gcm/log.hpp"
#include "gcm/random.hpp"
#include "gcm/version.hpp"

namespace gcm {

namespace {

using json = nlohmann::json;

std::string scheme_tag(QuantScheme s) { return std::string(to_string(s)); }

void append(Metadata& m, const std::string& k, const std::string& v) { m.emplace_back(k, v); }

}  // namespace

std::string RunManifest::to_json() const {
  json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["version"] = version;
  j["config"] = config_text;
  j["stages"] = json::array();
  for (const auto& s : stages) j["stages"].push_back({{"name", s.name}, {"seconds", s.seconds}});
  j["files"] = json::array();
  for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}});
  j["cache"] = {{"hits", cache_hits}, {"misses", cache_misses}};
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  const json j = json::parse(text);
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.config_text = j.at("config").get<std::string>();
  for (const auto& s : j.at("stages")) m.stages.push_back({s.at("name"), s.at("seconds")});
  for (const auto& f : j.at("files")) m.files.push_back({f.at("path"), f.at("sha256")});
  m.cache_hits = j.at("cache").at("hits").get<std::vector<std::string>>();
  m.cache_misses = j.at("cache").at("misses").get<std::vector<std::string>>();
  return m;
}

RunContext::RunContext(std::string command, RunConfig config) : config_(std::move(config)) {
  manifest_.command = std::move(command);
  manifest_.config_hash = config_hash(config_);
  manifest_.version = kVersion;
  manifest_.config_text = to_ini(config_);
}

Metadata RunContext::metadata() const {
  return {{"tool", "gcmlab"},
          {"version", manifest_.version},
          {"command", manifest_.command},
          {"config_hash", manifest_.config_hash}};
}

std::filesystem::path RunContext::output_path(const std::string& name) const {
  return config_.output.dir / name;
}

void RunContext::record(const std::filesystem::path& path) {
  std::string rel = std::filesystem::relative(path, config_.output.dir).generic_string();
  const std::string digest = sha256_file(path);
  for (auto& f : manifest_.files)
    if (f.path == rel) {
      f.sha256 = digest;
      return;
    }
  manifest_.files.push_back({rel, digest});
}

void RunContext::add_timing(const std::string& name, double seconds) {
  manifest_.stages.push_back({name, seconds});
}

std::filesystem::path RunContext::finish() {
  const auto path = output_path("manifest.json");
  std::filesystem::create_directories(config_.output.dir);
  std::ofstream out(path);
  if (!out) throw StageError("manifest", "cannot write " + path.string());
  out << manifest_.to_json();
  return path;
}

BasisSpec resolve_basis(const RunConfig& config, QuantScheme scheme) {
  BasisSpec spec = BasisSpec::make(scheme, 1.0, config.model, config.basis.dimension);
  if (config.basis.a_osc) {
    spec.a_osc = *config.basis.a_osc;
  } else {
    spec.a_osc = optimize_a_osc(config.model, spec, config.basis.c_shift).a_osc;
  }
  return spec;
}

std::string spectrum_cache_key(const RunConfig& config, QuantScheme scheme) {
  const auto& m = config.model;
  const auto& b = config.basis;
  const auto& c = b.certification;
  const std::string text = fmt::format(
      "spectrum-v1;scheme={};A={};B={};C={};K={};hbar={};dim={};a_osc={};c_shift={};"
      "tail={};tail_limit={};tail_fraction={};tail_tol={};dimcert={};growth={};dE={}",
      to_string(scheme), format_double(m.A), format_double(m.B), format_double(m.C),
      format_double(m.K), format_double(m.hbar), b.dimension,
      b.a_osc ? format_double(*b.a_osc) : std::string("auto"), format_double(b.c_shift),
      c.tail_certification, c.tail_vector_limit, format_double(c.tail_fraction),
      format_double(c.tail_mass_tol), c.dimension_certification, format_double(c.growth_factor),
      format_double(c.dE_tol));
  return sha256_hex(text);
}

Spectrum obtain_spectrum(RunContext& ctx, QuantScheme scheme) {
  const auto& cfg = ctx.config();
  const std::string tag = scheme_tag(scheme);
  const std::string key = spectrum_cache_key(cfg, scheme);
  std::filesystem::path cache_file;
  if (!cfg.output.cache_dir.empty()) {
    cache_file = cfg.output.cache_dir / (key + ".spec");
    if (auto hit = load_spectrum_cache(cache_file, key)) {
      ctx.manifest().cache_hits.push_back(tag);
      return *std::move(hit);
    }
  }
  ctx.manifest().cache_misses.push_back(tag);
  const BasisSpec spec = ctx.stage("basis:" + tag, [&] { return resolve_basis(cfg, scheme); });
  Spectrum s = ctx.stage("eigensolve:" + tag, [&] {
    return compute_spectrum(cfg.model, spec, cfg.basis.certification);
  });
  if (!cache_file.empty())
    ctx.stage("cache:" + tag, [&] {
      save_spectrum_cache(cache_file, s, key);
      return 0;
    });
  return s;
}

void cmd_spectrum(RunContext& ctx) {
  for (const QuantScheme scheme : ctx.config().basis.schemes) {
    const Spectrum s = obtain_spectrum(ctx, scheme);
    Metadata meta = ctx.metadata();
    append(meta, "scheme", scheme_tag(scheme));
    append(meta, "dimension", std::to_string(s.meta.dimension));
    append(meta, "a_osc", format_double(s.meta.a_osc));
    append(meta, "half_bandwidth", std::to_string(s.meta.half_bandwidth));
    append(meta, "converged_count", std::to_string(s.converged_count));
    append(meta, "tail_converged", std::to_string(s.meta.tail_converged));
    append(meta, "dimension_converged", std::to_string(s.meta.dimension_converged));
    append(meta, "near_ties", std::to_string(s.meta.near_ties));
    append(meta, "max_residual", format_double(s.meta.max_residual));
    const auto path = ctx.output_path("spectrum_" + scheme_tag(scheme) + ".csv");
    write_spectrum_csv(path, s, std::move(meta));
    ctx.record(path);
  }
}

namespace {

void emit_brody(RunContext& ctx, const std::string& tag, const BrodyCurve& curve,
                std::span<const double> levels) {
  const auto& cfg = ctx.config();
  Metadata meta = ctx.metadata();
  append(meta, "source", tag);
  append(meta, "bin_size", std::to_string(cfg.stats.bin_size));
  append(meta, "shift", std::to_string(cfg.stats.shift));
  append(meta, "unfold_degree", std::to_string(cfg.stats.unfold_degree));
  const auto main = ctx.output_path("brody_" + tag + ".csv");
  write_brody_csv(main, curve, meta);
  ctx.record(main);
  const auto adj = ctx.output_path("brody_" + tag + "_adjunct.csv");
  write_brody_adjunct_csv(adj, curve, meta);
  ctx.record(adj);

  if (cfg.histogram_bins.empty()) return;
  const auto bins = bin_levels(levels, cfg.stats.bin_size, cfg.stats.shift);
  for (std::size_t b : cfg.histogram_bins) {
    if (b >= bins.size())
      throw UsageError(fmt::format("stats.histogram_bins: bin {} out of range ({} bins)", b,
                                   bins.size()));
    const auto u = ctx.stage("unfold", [&] { return unfold(bins[b], cfg.stats.unfold_degree); });
    const double omega = curve.points[b].omega;
    const auto h = nns_histogram(u.spacings, cfg.histogram_width,
                                 std::isfinite(omega) ? std::optional<double>(omega) : std::nullopt);
    Metadata hm = meta;
    append(hm, "bin", std::to_string(b));
    append(hm, "centroid_energy", format_double(bins[b].centroid));
    const auto path = ctx.output_path(fmt::format("nns_{}_bin{}.csv", tag, b));
    write_histogram_csv(path, h, std::move(hm));
    ctx.record(path);
  }
}

}  // namespace

void cmd_brody(RunContext& ctx, const std::optional<std::filesystem::path>& levels_file) {
  const auto& cfg = ctx.config();
  if (levels_file) {
    std::vector<double> levels;
    try {
      levels = read_levels(*levels_file);
    } catch (const std::exception& e) {
      throw UsageError(std::string("cannot read level file: ") + e.what());
    }
    const auto curve = ctx.stage("brody:external", [&] { return omega_vs_energy(levels, cfg.stats); });
    emit_brody(ctx, "external", curve, levels);
    return;
  }
  for (const QuantScheme scheme : cfg.basis.schemes) {
    const Spectrum s = obtain_spectrum(ctx, scheme);
    const std::string tag = scheme_tag(scheme);
    const auto curve = ctx.stage("brody:" + tag, [&] { return omega_vs_energy(s, cfg.stats); });
    emit_brody(ctx, tag, curve, s.converged());
  }
}

void cmd_classical(RunContext& ctx) {
  const auto& cfg = ctx.config();
  std::vector<RegularFractionPoint> points;
  for (std::size_t i = 0; i < cfg.classical.energies.size(); ++i) {
    const double E = cfg.classical.energies[i];
    points.push_back(ctx.stage(fmt::format("freg:E={}", format_double(E)), [&] {
      return regular_fraction(cfg.model, E, cfg.classical.count,
                              derive_seed(cfg.stats.seed, 0, i), cfg.classical.sali,
                              cfg.output.threads);
    }));
  }
  Metadata meta = ctx.metadata();
  append(meta, "count", std::to_string(cfg.classical.count));
  append(meta, "t_max", format_double(cfg.classical.sali.t_max));
  const auto path = ctx.output_path("freg.csv");
  write_freg_csv(path, points, std::move(meta));
  ctx.record(path);
}

void cmd_freg_map(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const std::vector<double> Bs = cfg.classical.B_grid.empty() ? std::vector<double>{cfg.model.B}
                                                              : cfg.classical.B_grid;
  const std::vector<double>& Es =
      cfg.classical.E_grid.empty() ? cfg.classical.energies : cfg.classical.E_grid;
  const auto cells = ctx.stage("freg_map", [&] {
    return freg_map(cfg.model, Bs, Es, cfg.classical.count, cfg.stats.seed, cfg.classical.sali,
                    cfg.output.threads);
  });
  for (const auto& c : cells)
    if (!c.error.empty())
      log_warning(fmt::format("freg-map cell B={} E={}: {}", c.B, c.E, c.error));
  Metadata meta = ctx.metadata();
  append(meta, "count", std::to_string(cfg.classical.count));
  append(meta, "t_max", format_double(cfg.classical.sali.t_max));
  const auto path = ctx.output_path("freg_map.csv");
  write_freg_csv(path, cells, std::move(meta));
  ctx.record(path);
}

void cmd_bias_study(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const auto rows = ctx.stage("bias_study", [&] {
    return bias_study(cfg.stats.bin_size - 1, cfg.bias_omegas,
                      std::max<std::size_t>(cfg.stats.bias_trials, 2), cfg.stats.seed);
  });
  Metadata meta = ctx.metadata();
  append(meta, "sample_size", std::to_string(cfg.stats.bin_size - 1));
  const auto path = ctx.output_path("bias_study.csv");
  write_bias_csv(path, rows, std::move(meta));
  ctx.record(path);
}

void cmd_density(RunContext& ctx) {
  const auto& cfg = ctx.config();
  if (cfg.density.levels.empty()) throw UsageError("density.levels is empty");
  const std::size_t lo = *std::min_element(cfg.density.levels.begin(), cfg.density.levels.end());
  const std::size_t hi = *std::max_element(cfg.density.levels.begin(), cfg.density.levels.end());
  if (hi >= cfg.basis.dimension)
    throw UsageError(fmt::format("density.levels: index {} out of range (dimension {})", hi,
                                 cfg.basis.dimension));
  for (const QuantScheme scheme : cfg.basis.schemes) {
    const std::string tag = scheme_tag(scheme);
    const BasisSpec spec = ctx.stage("basis:" + tag, [&] { return resolve_basis(cfg, scheme); });
    const auto sol = ctx.stage("eigenvectors:" + tag, [&] {
      SolveOptions so;
      so.want_vectors = true;
      so.vector_first = lo;
      so.vector_count = hi - lo + 1;
      return solve(assemble(cfg.model, spec), so);
    });
    for (std::size_t level : cfg.density.levels) {
      const double E = sol.values[level];
      double radius = 0.0;
      for (int j = 0; j < 360; ++j)
        for (const auto& [b0, b1] :
             accessible_boundary(cfg.model, E, 2.0 * std::numbers::pi * j / 360.0))
          radius = std::max(radius, b1);
      if (!(radius > 0.0)) radius = 1.0;
      const double half = cfg.density.margin * radius;
      const GridAxis axis{-half, half, cfg.density.points};
      const auto grid = ctx.stage(fmt::format("density:{}:{}", tag, level), [&] {
        return density_grid(sol.vectors->column(level - lo), spec, cfg.model, axis, axis, E, level,
                            cfg.output.threads);
      });
      Metadata meta = ctx.metadata();
      append(meta, "a_osc", format_double(spec.a_osc));
      const std::string stem = fmt::format("density_{}_{}", tag, level);
      const auto csv = ctx.output_path(stem + ".csv");
      write_density_csv(csv, grid, meta);
      ctx.record(csv);
      const auto pgm = ctx.output_path(stem + ".pgm");
      write_density_pgm(pgm, grid);
      ctx.record(pgm);
      const auto bnd = ctx.output_path(stem + "_boundary.csv");
      write_boundary_csv(bnd, grid, meta);
      ctx.record(bnd);
    }
  }
}

Comparison cmd_compare(RunContext& ctx, const std::filesystem::path& brody_file,
                       const std::filesystem::path& freg_file, const CompareOptions& options) {
  Curve omega, freg;
  std::vector<RegularFractionPoint> points;
  try {
    for (const auto& p : read_brody_curve(brody_file)) omega.push_back(p);
    points = read_freg_csv(freg_file);
  } catch (const std::exception& e) {
    throw UsageError(std::string("compare: ") + e.what());
  }
  if (!points.empty()) {
    const double B0 = points.front().B;
    for (const auto& p : points) {
      if (p.B != B0) throw UsageError("compare: f_reg file holds more than one B value");
      freg.emplace_back(p.E, p.f_reg);
    }
  }
  std::sort(freg.begin(), freg.end());
  Comparison cmp;
  try {
    cmp = compare_curves(omega, freg, options);
  } catch (const std::invalid_argument& e) {
    throw StageError("compare", e.what());
  }
  Metadata meta = ctx.metadata();
  append(meta, "pearson", format_double(cmp.pearson));
  append(meta, "restricted_to_overlap", cmp.restricted ? "true" : "false");
  append(meta, "energy_tol", format_double(options.energy_tol));
  CsvTable t{std::move(meta), {"energy", "one_minus_omega", "f_reg", "freg_energy"}, {}};
  for (const auto& p : cmp.points)
    t.rows.push_back({format_double(p.energy), format_double(p.adjunct), format_double(p.f_reg),
                      format_double(p.freg_energy)});
  const auto path = ctx.output_path("compare.csv");
  write_csv(path, t);
  ctx.record(path);
  return cmp;
}

}  // namespace gcm
