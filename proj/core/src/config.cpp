#include "gcm/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gcm/hashing.hpp"
#include "gcm/io.hpp"

namespace gcm {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  try {
    std::size_t pos = 0;
    const double d = std::stod(t, &pos);
    if (pos == t.size() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a finite number, got '" + t + "'");
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  try {
    std::size_t pos = 0;
    if (!t.empty() && t[0] != '-') {
      const auto u = std::stoull(t, &pos);
      if (pos == t.size()) return u;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a non-negative integer, got '" + t + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Comma-separated numbers; an item "start:stop:count" expands to count
// evenly spaced values including both ends.
std::vector<double> parse_number_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_number(key, item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError(key + ": range must be start:stop:count");
    const double a = parse_number(key, item.substr(0, c1));
    const double b = parse_number(key, item.substr(c1 + 1, c2 - c1 - 1));
    const auto n = parse_unsigned(key, item.substr(c2 + 1));
    if (n == 0) throw ConfigError(key + ": range count must be positive");
    for (std::uint64_t i = 0; i < n; ++i)
      out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

struct Key {
  std::string name;  // section.key
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;  // empty: not written back
};

std::string num(double v) { return format_double(v); }

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    auto number = [&k](std::string name, auto member) {
      k.push_back({name,
                   [name, member](RunConfig& c, const std::string& v) {
                     member(c) = parse_number(name, v);
                   },
                   [member](const RunConfig& c) { return num(member(const_cast<RunConfig&>(c))); }});
    };
    auto count = [&k](std::string name, auto member) {
      k.push_back({name,
                   [name, member](RunConfig& c, const std::string& v) {
                     member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(
                         parse_unsigned(name, v));
                   },
                   [member](const RunConfig& c) {
                     return std::to_string(member(const_cast<RunConfig&>(c)));
                   }});
    };
    auto flag = [&k](std::string name, auto member) {
      k.push_back({name,
                   [name, member](RunConfig& c, const std::string& v) {
                     member(c) = parse_bool(name, v);
                   },
                   [member](const RunConfig& c) {
                     return std::string(member(const_cast<RunConfig&>(c)) ? "true" : "false");
                   }});
    };
    auto numbers = [&k](std::string name, auto member) {
      k.push_back({name,
                   [name, member](RunConfig& c, const std::string& v) {
                     member(c) = parse_number_list(name, v);
                   },
                   [member](const RunConfig& c) {
                     return join_numbers(member(const_cast<RunConfig&>(c)));
                   }});
    };

    number("model.A", [](RunConfig& c) -> double& { return c.model.A; });
    number("model.B", [](RunConfig& c) -> double& { return c.model.B; });
    number("model.C", [](RunConfig& c) -> double& { return c.model.C; });
    number("model.K", [](RunConfig& c) -> double& { return c.model.K; });
    number("model.hbar", [](RunConfig& c) -> double& { return c.model.hbar; });
    // kappa = hbar^2 / K; sets hbar at the current K.
    k.push_back({"model.kappa",
                 [](RunConfig& c, const std::string& v) {
                   const double kappa = parse_number("model.kappa", v);
                   if (!(kappa > 0.0)) throw ConfigError("model.kappa must be positive");
                   c.model.hbar = std::sqrt(kappa * c.model.K);
                 },
                 {}});

    k.push_back({"basis.schemes",
                 [](RunConfig& c, const std::string& v) {
                   c.basis.schemes.clear();
                   for (const auto& s : split_list(v)) {
                     if (s == "all") {
                       c.basis.schemes.assign(std::begin(kAllSchemes), std::end(kAllSchemes));
                       continue;
                     }
                     try {
                       c.basis.schemes.push_back(parse_scheme(s));
                     } catch (const std::invalid_argument&) {
                       throw ConfigError("basis.schemes: unknown scheme '" + s +
                                         "' (expected 2d-even, 2d-odd, 5d or all)");
                     }
                   }
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.basis.schemes.size(); ++i)
                     out += (i ? "," : "") + std::string(to_string(c.basis.schemes[i]));
                   return out;
                 }});
    count("basis.dimension", [](RunConfig& c) -> std::size_t& { return c.basis.dimension; });
    k.push_back({"basis.a_osc",
                 [](RunConfig& c, const std::string& v) {
                   if (trim(v) == "auto")
                     c.basis.a_osc.reset();
                   else
                     c.basis.a_osc = parse_number("basis.a_osc", v);
                 },
                 [](const RunConfig& c) {
                   return c.basis.a_osc ? num(*c.basis.a_osc) : std::string("auto");
                 }});
    number("basis.c_shift", [](RunConfig& c) -> double& { return c.basis.c_shift; });
    flag("basis.tail_certification",
         [](RunConfig& c) -> bool& { return c.basis.certification.tail_certification; });
    count("basis.tail_vector_limit",
          [](RunConfig& c) -> std::size_t& { return c.basis.certification.tail_vector_limit; });
    number("basis.tail_fraction",
           [](RunConfig& c) -> double& { return c.basis.certification.tail_fraction; });
    number("basis.tail_mass_tol",
           [](RunConfig& c) -> double& { return c.basis.certification.tail_mass_tol; });
    flag("basis.dimension_certification",
         [](RunConfig& c) -> bool& { return c.basis.certification.dimension_certification; });
    number("basis.growth_factor",
           [](RunConfig& c) -> double& { return c.basis.certification.growth_factor; });
    number("basis.dE_tol", [](RunConfig& c) -> double& { return c.basis.certification.dE_tol; });

    count("stats.bin_size", [](RunConfig& c) -> std::size_t& { return c.stats.bin_size; });
    count("stats.shift", [](RunConfig& c) -> std::size_t& { return c.stats.shift; });
    count("stats.unfold_degree", [](RunConfig& c) -> int& { return c.stats.unfold_degree; });
    count("stats.seed", [](RunConfig& c) -> std::uint64_t& { return c.stats.seed; });
    count("stats.bias_trials", [](RunConfig& c) -> std::size_t& { return c.stats.bias_trials; });
    numbers("stats.bias_omegas", [](RunConfig& c) -> std::vector<double>& { return c.bias_omegas; });
    k.push_back({"stats.histogram_bins",
                 [](RunConfig& c, const std::string& v) {
                   c.histogram_bins.clear();
                   for (const auto& s : split_list(v))
                     c.histogram_bins.push_back(parse_unsigned("stats.histogram_bins", s));
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.histogram_bins.size(); ++i)
                     out += (i ? "," : "") + std::to_string(c.histogram_bins[i]);
                   return out;
                 }});
    number("stats.histogram_width", [](RunConfig& c) -> double& { return c.histogram_width; });
    number("stats.max_residual_rms",
           [](RunConfig& c) -> double& { return c.stats.max_residual_rms; });
    number("stats.max_intercept_gap",
           [](RunConfig& c) -> double& { return c.stats.max_intercept_gap; });

    number("classical.t_max", [](RunConfig& c) -> double& { return c.classical.sali.t_max; });
    number("classical.chaotic_threshold",
           [](RunConfig& c) -> double& { return c.classical.sali.chaotic_threshold; });
    number("classical.regular_threshold",
           [](RunConfig& c) -> double& { return c.classical.sali.regular_threshold; });
    number("classical.renorm_interval",
           [](RunConfig& c) -> double& { return c.classical.sali.renorm_interval; });
    number("classical.rtol",
           [](RunConfig& c) -> double& { return c.classical.sali.integration.ode.rtol; });
    number("classical.atol",
           [](RunConfig& c) -> double& { return c.classical.sali.integration.ode.atol; });
    number("classical.energy_tol",
           [](RunConfig& c) -> double& { return c.classical.sali.integration.energy_tol; });
    count("classical.count", [](RunConfig& c) -> std::size_t& { return c.classical.count; });
    numbers("classical.energies",
            [](RunConfig& c) -> std::vector<double>& { return c.classical.energies; });
    numbers("classical.B_grid",
            [](RunConfig& c) -> std::vector<double>& { return c.classical.B_grid; });
    numbers("classical.E_grid",
            [](RunConfig& c) -> std::vector<double>& { return c.classical.E_grid; });

    k.push_back({"density.levels",
                 [](RunConfig& c, const std::string& v) {
                   c.density.levels.clear();
                   for (const auto& s : split_list(v))
                     c.density.levels.push_back(parse_unsigned("density.levels", s));
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.density.levels.size(); ++i)
                     out += (i ? "," : "") + std::to_string(c.density.levels[i]);
                   return out;
                 }});
    count("density.points", [](RunConfig& c) -> std::size_t& { return c.density.points; });
    number("density.margin", [](RunConfig& c) -> double& { return c.density.margin; });

    k.push_back({"output.dir",
                 [](RunConfig& c, const std::string& v) { c.output.dir = trim(v); },
                 [](const RunConfig& c) { return c.output.dir.string(); }});
    k.push_back({"output.cache_dir",
                 [](RunConfig& c, const std::string& v) { c.output.cache_dir = trim(v); },
                 [](const RunConfig& c) { return c.output.cache_dir.string(); }});
    count("output.threads", [](RunConfig& c) -> unsigned& { return c.output.threads; });
    return k;
  }();
  return keys;
}

const Key& find_key(const std::string& name) {
  for (const auto& k : key_table())
    if (k.name == name) return k;
  throw ConfigError("unknown configuration key '" + name + "'");
}

void validate(const RunConfig& c) {
  try {
    c.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (c.basis.schemes.empty()) throw ConfigError("basis.schemes: at least one scheme required");
  if (c.basis.dimension == 0) throw ConfigError("basis.dimension must be positive");
  if (c.basis.a_osc && !(*c.basis.a_osc > 0.0)) throw ConfigError("basis.a_osc must be positive");
  if (!(c.basis.c_shift > 0.0 && c.basis.c_shift <= 1.0))
    throw ConfigError("basis.c_shift must lie in (0, 1]");
  if (!(c.basis.certification.growth_factor >= 1.0))
    throw ConfigError("basis.growth_factor must be >= 1");
  if (!(c.basis.certification.tail_fraction > 0.0 && c.basis.certification.tail_fraction <= 1.0))
    throw ConfigError("basis.tail_fraction must lie in (0, 1]");
  if (c.stats.bin_size < kMinFitSpacings + 1)
    throw ConfigError("stats.bin_size must be at least 51");
  if (c.stats.shift == 0) throw ConfigError("stats.shift must be positive");
  if (c.stats.unfold_degree < 0 || c.stats.unfold_degree > 15)
    throw ConfigError("stats.unfold_degree must lie in [0, 15]");
  for (double w : c.bias_omegas)
    if (!(w > -1.0)) throw ConfigError("stats.bias_omegas must exceed -1");
  const auto& s = c.classical.sali;
  if (!(s.t_max > 0.0) || !(s.renorm_interval > 0.0))
    throw ConfigError("classical.t_max and classical.renorm_interval must be positive");
  if (!(s.chaotic_threshold > 0.0) || !(s.regular_threshold >= s.chaotic_threshold))
    throw ConfigError("classical thresholds must satisfy 0 < chaotic <= regular");
  if (c.classical.count == 0) throw ConfigError("classical.count must be positive");
  if (!(c.histogram_width > 0.0)) throw ConfigError("stats.histogram_width must be positive");
  if (c.density.points < 2) throw ConfigError("density.points must be at least 2");
  if (!(c.density.margin > 0.0)) throw ConfigError("density.margin must be positive");
}

RunConfig build(const pt::ptree& tree, const ConfigOverrides& overrides) {
  RunConfig c;
  // Model keys are applied first so that kappa sees the final K.
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) entries.emplace_back(section + "." + key, value.data());
  }
  for (const auto& o : overrides) entries.push_back(o);
  std::stable_partition(entries.begin(), entries.end(),
                        [](const auto& e) { return e.first != "model.kappa"; });
  for (const auto& [name, value] : entries) find_key(name).set(c, value);
  validate(c);
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& ini_text, const ConfigOverrides& overrides) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return build(tree, overrides);
}

RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  if (path.empty()) return build(pt::ptree{}, overrides);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string to_ini(const RunConfig& config, bool include_output) {
  std::string out, section;
  for (const auto& k : key_table()) {
    if (!k.get) continue;
    const auto dot = k.name.find('.');
    const std::string sec = k.name.substr(0, dot);
    if (sec == "output" && !include_output) continue;
    if (sec != section) {
      out += (out.empty() ? "" : "\n") + fmt::format("[{}]\n", sec);
      section = sec;
    }
    out += fmt::format("{} = {}\n", k.name.substr(dot + 1), k.get(config));
  }
  return out;
}

std::string config_hash(const RunConfig& config) { return sha256_hex(to_ini(config, false)); }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : key_table()) n.push_back(k.name);
    return n;
  }();
  return names;
}

}  // namespace gcm
