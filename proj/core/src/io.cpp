#include "gcm/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gcm {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  const std::string t = trim(s);
  if (t == "nan" || t == "-nan") return NAN;
  if (t == "inf") return INFINITY;
  if (t == "-inf") return -INFINITY;
  std::size_t pos = 0;
  const double v = std::stod(t, &pos);
  if (pos != t.size()) throw std::runtime_error("not a number: '" + t + "'");
  return v;
}

std::size_t to_size(const std::string& s) {
  const std::string t = trim(s);
  std::size_t pos = 0;
  const auto v = std::stoull(t, &pos);
  if (pos != t.size()) throw std::runtime_error("not an integer: '" + t + "'");
  return static_cast<std::size_t>(v);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

constexpr char kCacheMagic[8] = {'G', 'C', 'M', 'S', 'P', 'E', 'C', '\0'};
constexpr std::uint32_t kCacheVersion = 2;

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), sizeof(T));
  } else {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
bool get(std::istream& in, T& v) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1)
    std::reverse(bytes.begin(), bytes.end());
  v = std::bit_cast<T>(bytes);
  return true;
}

}  // namespace

std::string format_double(double v) { return fmt::format("{}", v); }

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::runtime_error("CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::optional<std::string> CsvTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string::npos)
        t.metadata.emplace_back(body, "");
      else
        t.metadata.emplace_back(trim(body.substr(0, colon)), trim(body.substr(colon + 1)));
      continue;
    }
    auto fields = split(line, ',');
    if (t.columns.empty()) {
      for (auto& f : fields) f = trim(f);
      t.columns = std::move(fields);
    } else {
      if (fields.size() != t.columns.size())
        throw std::runtime_error(path.string() + ": row with " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(t.columns.size()));
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  auto out = open_out(path);
  for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s, Metadata meta) {
  CsvTable t{std::move(meta), {"index", "energy", "converged"}, {}};
  t.rows.reserve(s.levels.size());
  for (std::size_t i = 0; i < s.levels.size(); ++i)
    t.rows.push_back({std::to_string(i), format_double(s.levels[i]),
                      i < s.converged_count ? "1" : "0"});
  write_csv(path, t);
}

std::vector<double> read_levels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (!t.empty() && t[0] != '#') lines.push_back(t);
  }
  std::vector<double> levels;
  if (!lines.empty() && lines.front().find(',') != std::string::npos) {
    const auto table = read_csv(path);
    const std::size_t ie = table.column("energy");
    std::optional<std::size_t> ic;
    if (std::find(table.columns.begin(), table.columns.end(), "converged") != table.columns.end())
      ic = table.column("converged");
    for (const auto& row : table.rows)
      if (!ic || trim(row[*ic]) != "0") levels.push_back(to_double(row[ie]));
  } else {
    for (const auto& l : lines) levels.push_back(to_double(l));
  }
  if (!std::is_sorted(levels.begin(), levels.end())) std::sort(levels.begin(), levels.end());
  return levels;
}

void write_brody_csv(const std::filesystem::path& path, const BrodyCurve& c, Metadata meta) {
  CsvTable t{std::move(meta),
             {"centroid_energy", "omega", "stat_err", "bin_start", "bin_size", "flags"},
             {}};
  for (const auto& p : c.points)
    t.rows.push_back({format_double(p.centroid_energy), format_double(p.omega),
                      format_double(p.stat_err), std::to_string(p.bin_start),
                      std::to_string(p.bin_size), flags_to_string(p.flags)});
  write_csv(path, t);
}

void write_brody_adjunct_csv(const std::filesystem::path& path, const BrodyCurve& c,
                             Metadata meta) {
  CsvTable t{std::move(meta),
             {"centroid_energy", "omega", "one_minus_omega", "stat_err", "syst_err", "flags"},
             {}};
  for (const auto& p : c.points)
    t.rows.push_back({format_double(p.centroid_energy), format_double(p.omega),
                      format_double(1.0 - p.omega), format_double(p.stat_err),
                      format_double(p.syst_err), flags_to_string(p.flags)});
  write_csv(path, t);
}

std::vector<std::pair<double, double>> read_brody_curve(const std::filesystem::path& path,
                                                        bool include_flagged) {
  const auto t = read_csv(path);
  const auto ie = t.column("centroid_energy"), iw = t.column("omega");
  const auto it = std::find(t.columns.begin(), t.columns.end(), "flags");
  std::vector<std::pair<double, double>> out;
  for (const auto& row : t.rows) {
    if (!include_flagged && it != t.columns.end()) {
      const std::string f = trim(row[static_cast<std::size_t>(it - t.columns.begin())]);
      if (f != "ok") continue;
    }
    const double w = to_double(row[iw]);
    if (std::isfinite(w)) out.emplace_back(to_double(row[ie]), w);
  }
  return out;
}

void write_histogram_csv(const std::filesystem::path& path, const NnsHistogram& h,
                         Metadata meta) {
  meta.emplace_back("bin_width", format_double(h.bin_width));
  meta.emplace_back("brody_omega", format_double(h.omega));
  CsvTable t{std::move(meta), {"s", "density", "poisson", "wigner", "brody"}, {}};
  for (std::size_t i = 0; i < h.centers.size(); ++i)
    t.rows.push_back({format_double(h.centers[i]), format_double(h.density[i]),
                      format_double(h.poisson[i]), format_double(h.wigner[i]),
                      format_double(h.brody[i])});
  write_csv(path, t);
}

void write_bias_csv(const std::filesystem::path& path, std::span<const BiasRow> rows,
                    Metadata meta) {
  CsvTable t{std::move(meta),
             {"omega_true", "mean_fit", "bias", "stddev", "trials", "sample_size"},
             {}};
  for (const auto& r : rows)
    t.rows.push_back({format_double(r.omega_true), format_double(r.mean_fit),
                      format_double(r.bias), format_double(r.stddev), std::to_string(r.trials),
                      std::to_string(r.sample_size)});
  write_csv(path, t);
}

void write_freg_csv(const std::filesystem::path& path,
                    std::span<const RegularFractionPoint> points, Metadata meta) {
  CsvTable t{std::move(meta),
             {"B", "E", "f_reg", "sigma", "n_regular", "n_chaotic", "n_undecided"},
             {}};
  for (const auto& p : points)
    t.rows.push_back({format_double(p.B), format_double(p.E), format_double(p.f_reg),
                      format_double(p.sigma), std::to_string(p.n_regular),
                      std::to_string(p.n_chaotic), std::to_string(p.n_undecided)});
  write_csv(path, t);
}

std::vector<RegularFractionPoint> read_freg_csv(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  const auto ib = t.column("B"), ie = t.column("E"), ifr = t.column("f_reg"),
             is = t.column("sigma"), ir = t.column("n_regular"), ic = t.column("n_chaotic"),
             iu = t.column("n_undecided");
  std::vector<RegularFractionPoint> out;
  for (const auto& row : t.rows) {
    RegularFractionPoint p;
    p.B = to_double(row[ib]);
    p.E = to_double(row[ie]);
    p.f_reg = to_double(row[ifr]);
    p.sigma = to_double(row[is]);
    p.n_regular = to_size(row[ir]);
    p.n_chaotic = to_size(row[ic]);
    p.n_undecided = to_size(row[iu]);
    p.n_total = p.n_regular + p.n_chaotic + p.n_undecided;
    out.push_back(p);
  }
  return out;
}

void write_density_csv(const std::filesystem::path& path, const DensityGrid& g, Metadata meta) {
  meta.emplace_back("scheme", std::string(to_string(g.scheme)));
  meta.emplace_back("level_index", std::to_string(g.level_index));
  meta.emplace_back("energy", format_double(g.energy));
  meta.emplace_back("x_axis", fmt::format("{},{},{}", format_double(g.x_axis.min),
                                          format_double(g.x_axis.max), g.x_axis.count));
  meta.emplace_back("y_axis", fmt::format("{},{},{}", format_double(g.y_axis.min),
                                          format_double(g.y_axis.max), g.y_axis.count));
  meta.emplace_back("peak", format_double(g.peak()));
  CsvTable t{std::move(meta), {}, {}};
  t.columns.push_back("y\\x");
  for (std::size_t ix = 0; ix < g.x_axis.count; ++ix)
    t.columns.push_back(format_double(g.x_axis.at(ix)));
  for (std::size_t iy = 0; iy < g.y_axis.count; ++iy) {
    std::vector<std::string> row{format_double(g.y_axis.at(iy))};
    for (std::size_t ix = 0; ix < g.x_axis.count; ++ix) row.push_back(format_double(g.at(ix, iy)));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_density_pgm(const std::filesystem::path& path, const DensityGrid& g) {
  auto out = open_out(path, true);
  out << "P5\n" << g.x_axis.count << ' ' << g.y_axis.count << "\n255\n";
  const double peak = g.peak();
  for (std::size_t r = 0; r < g.y_axis.count; ++r) {
    const std::size_t iy = g.y_axis.count - 1 - r;
    for (std::size_t ix = 0; ix < g.x_axis.count; ++ix) {
      const double v = peak > 0.0 ? g.at(ix, iy) / peak : 0.0;
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)))));
    }
  }
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void write_boundary_csv(const std::filesystem::path& path, const DensityGrid& g, Metadata meta) {
  meta.emplace_back("energy", format_double(g.energy));
  CsvTable t{std::move(meta), {"polyline", "x", "y"}, {}};
  for (std::size_t k = 0; k < g.boundary.size(); ++k)
    for (const auto& c : g.boundary[k])
      t.rows.push_back({std::to_string(k), format_double(c.x), format_double(c.y)});
  write_csv(path, t);
}

void save_spectrum_cache(const std::filesystem::path& path, const Spectrum& s,
                         const std::string& key) {
  auto out = open_out(path, true);
  out.write(kCacheMagic, sizeof kCacheMagic);
  put(out, kCacheVersion);
  put(out, static_cast<std::uint32_t>(key.size()));
  out.write(key.data(), static_cast<std::streamsize>(key.size()));
  put(out, static_cast<std::uint8_t>(s.scheme));
  put(out, static_cast<std::uint64_t>(s.meta.dimension));
  put(out, static_cast<std::uint64_t>(s.meta.half_bandwidth));
  put(out, static_cast<std::uint64_t>(s.converged_count));
  put(out, static_cast<std::int64_t>(s.meta.tail_converged));
  put(out, static_cast<std::int64_t>(s.meta.dimension_converged));
  put(out, static_cast<std::uint64_t>(s.meta.comparison_dimension));
  put(out, static_cast<std::uint64_t>(s.meta.near_ties));
  for (double v : {s.params.A, s.params.B, s.params.C, s.params.K, s.params.hbar, s.meta.a_osc,
                   s.meta.trace_relative_error, s.meta.max_residual})
    put(out, v);
  put(out, static_cast<std::uint64_t>(s.levels.size()));
  for (double v : s.levels) put(out, v);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::optional<Spectrum> load_spectrum_cache(const std::filesystem::path& path,
                                            const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kCacheMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCacheMagic, sizeof magic) != 0)
    return std::nullopt;
  std::uint32_t version = 0, key_len = 0;
  if (!get(in, version) || version != kCacheVersion || !get(in, key_len) || key_len > 4096)
    return std::nullopt;
  std::string stored(key_len, '\0');
  if (!in.read(stored.data(), key_len) || stored != key) return std::nullopt;

  Spectrum s;
  std::uint8_t scheme = 0;
  std::uint64_t dim = 0, kd = 0, conv = 0, cmp = 0, ties = 0, n = 0;
  std::int64_t tail = 0, dimc = 0;
  if (!get(in, scheme) || scheme > 2 || !get(in, dim) || !get(in, kd) || !get(in, conv) ||
      !get(in, tail) || !get(in, dimc) || !get(in, cmp) || !get(in, ties))
    return std::nullopt;
  double* fields[] = {&s.params.A, &s.params.B,   &s.params.C,
                      &s.params.K, &s.params.hbar, &s.meta.a_osc,
                      &s.meta.trace_relative_error, &s.meta.max_residual};
  for (double* f : fields)
    if (!get(in, *f)) return std::nullopt;
  if (!get(in, n) || n != dim || conv > n) return std::nullopt;
  s.levels.resize(n);
  for (auto& v : s.levels)
    if (!get(in, v)) return std::nullopt;
  s.scheme = static_cast<QuantScheme>(scheme);
  s.converged_count = conv;
  s.meta.dimension = dim;
  s.meta.half_bandwidth = kd;
  s.meta.tail_converged = tail;
  s.meta.dimension_converged = dimc;
  s.meta.comparison_dimension = cmp;
  s.meta.near_ties = ties;
  return s;
}

}  // namespace gcm
