#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "gcm/config.hpp"
#include "gcm/hashing.hpp"
#include "gcm/io.hpp"

using namespace gcm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gcm_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Hashing, KnownDigest) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto p = scratch("hash.txt");
  std::ofstream(p) << "abc";
  EXPECT_EQ(sha256_file(p), sha256_hex("abc"));
}

TEST(Io, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5e-7), "-2.5e-07");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Io, CsvRoundTripWithMetadata) {
  CsvTable t;
  t.metadata = {{"tool", "gcmlab"}, {"config_hash", "abc"}};
  t.columns = {"a", "b"};
  t.rows = {{"1", "x"}, {"2", "y"}};
  const auto p = scratch("t.csv");
  write_csv(p, t);
  const auto text = slurp(p);
  EXPECT_EQ(text.rfind("# tool: gcmlab\n", 0), 0u);
  const auto r = read_csv(p);
  EXPECT_EQ(r.metadata, t.metadata);
  EXPECT_EQ(r.columns, t.columns);
  EXPECT_EQ(r.rows, t.rows);
  EXPECT_EQ(r.column("b"), 1u);
  EXPECT_THROW(r.column("zz"), std::runtime_error);
  EXPECT_EQ(r.meta("config_hash").value(), "abc");
  EXPECT_FALSE(r.meta("nope"));
}

TEST(Io, SpectrumCsvAndLevelLists) {
  Spectrum s;
  s.levels = {-1.0, -0.5, 0.25, 1.0};
  s.converged_count = 3;
  const auto p = scratch("spec.csv");
  write_spectrum_csv(p, s, {{"scheme", "2d-even"}});
  const auto t = read_csv(p);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"index", "energy", "converged"}));
  EXPECT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(read_levels(p), (std::vector<double>{-1.0, -0.5, 0.25}));

  const auto plain = scratch("levels.txt");
  std::ofstream(plain) << "# third-party list\n0.5\n1.5\n\n2.75\n";
  EXPECT_EQ(read_levels(plain), (std::vector<double>{0.5, 1.5, 2.75}));
  EXPECT_THROW(read_levels(scratch("missing.txt")), std::runtime_error);
}

TEST(Io, BrodyCsvColumns) {
  BrodyCurve c;
  BrodyPoint a;
  a.centroid_energy = 0.5;
  a.omega = 0.4;
  a.stat_err = 0.07;
  a.bin_size = 1000;
  BrodyPoint b = a;
  b.centroid_energy = 0.6;
  b.flags = kFlagNonBrody;
  c.points = {a, b};
  const auto p = scratch("brody.csv");
  write_brody_csv(p, c, {});
  EXPECT_EQ(read_csv(p).columns,
            (std::vector<std::string>{"centroid_energy", "omega", "stat_err", "bin_start", "bin_size",
                                      "flags"}));
  EXPECT_EQ(read_brody_curve(p).size(), 1u);
  EXPECT_EQ(read_brody_curve(p, true).size(), 2u);
  const auto q = scratch("brody_adj.csv");
  write_brody_adjunct_csv(q, c, {});
  const auto t = read_csv(q);
  EXPECT_EQ(t.columns[2], "one_minus_omega");
  EXPECT_NEAR(std::stod(t.rows[0][2]), 0.6, 1e-15);
}

TEST(Io, FregRoundTrip) {
  RegularFractionPoint r;
  r.B = 0.62;
  r.E = -0.1;
  r.f_reg = 0.75;
  r.sigma = 0.05;
  r.n_regular = 30;
  r.n_chaotic = 10;
  r.n_undecided = 2;
  r.n_total = 42;
  const auto p = scratch("freg.csv");
  const std::vector<RegularFractionPoint> pts{r};
  write_freg_csv(p, pts, {});
  EXPECT_EQ(read_csv(p).columns,
            (std::vector<std::string>{"B", "E", "f_reg", "sigma", "n_regular", "n_chaotic",
                                      "n_undecided"}));
  const auto back = read_freg_csv(p);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].f_reg, 0.75);
  EXPECT_EQ(back[0].n_undecided, 2u);
  EXPECT_EQ(back[0].n_total, 42u);
}

TEST(Io, DensityOutputs) {
  DensityGrid g;
  g.x_axis = {-1.0, 1.0, 3};
  g.y_axis = {0.0, 1.0, 2};
  g.values = {0, 1, 2, 3, 4, 5};
  g.boundary = {{{0.0, 1.0}, {1.0, 0.0}}};
  const auto csv = scratch("d.csv");
  write_density_csv(csv, g, {});
  const auto t = read_csv(csv);
  EXPECT_EQ(t.rows.size(), 2u);
  const auto pgm = scratch("d.pgm");
  write_density_pgm(pgm, g);
  const auto bytes = slurp(pgm);
  EXPECT_EQ(bytes.rfind("P5\n3 2\n255\n", 0), 0u);
  // Top row holds the largest y.
  EXPECT_EQ(static_cast<unsigned char>(bytes[bytes.size() - 6]), 153u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[bytes.size() - 4]), 255u);
  const auto bnd = scratch("b.csv");
  write_boundary_csv(bnd, g, {});
  EXPECT_EQ(read_csv(bnd).rows.size(), 2u);
}

TEST(Io, SpectrumCache) {
  Spectrum s;
  s.scheme = QuantScheme::FiveD;
  s.params = ModelParams::make(-1.0, 1.09, 1.0, 1.0, 0.05);
  s.levels = {-1.0, 0.1, 0.2};
  s.converged_count = 2;
  s.meta.dimension = 3;
  const auto p = scratch("c.spec");
  save_spectrum_cache(p, s, "key1");
  const auto back = load_spectrum_cache(p, "key1");
  ASSERT_TRUE(back);
  EXPECT_EQ(back->levels, s.levels);
  EXPECT_EQ(back->converged_count, 2u);
  EXPECT_EQ(back->scheme, QuantScheme::FiveD);
  EXPECT_EQ(back->params, s.params);
  EXPECT_FALSE(load_spectrum_cache(p, "key2"));
  EXPECT_FALSE(load_spectrum_cache(scratch("none.spec"), "key1"));
  std::ofstream(p, std::ios::binary) << "garbage";
  EXPECT_FALSE(load_spectrum_cache(p, "key1"));
}

TEST(Config, DefaultsAndOverrides) {
  const auto c = parse_config("", {});
  EXPECT_EQ(c.stats.bin_size, 1000u);
  EXPECT_EQ(c.stats.shift, 100u);
  EXPECT_EQ(c.stats.unfold_degree, 5);
  EXPECT_EQ(c.basis.c_shift, 0.6);

  const auto d = parse_config(
      "[model]\nA = -1\nB = 0.62\nkappa = 4e-4\nK = 4\n[basis]\nschemes = all\na_osc = auto\n"
      "[classical]\nenergies = -0.2:2:12\n",
      {{"stats.seed", "9"}});
  EXPECT_EQ(d.model.B, 0.62);
  EXPECT_NEAR(d.model.kappa(), 4e-4, 1e-18);  // kappa applied after K
  EXPECT_EQ(d.basis.schemes.size(), 3u);
  EXPECT_FALSE(d.basis.a_osc);
  EXPECT_EQ(d.stats.seed, 9u);
  ASSERT_EQ(d.classical.energies.size(), 12u);
  EXPECT_DOUBLE_EQ(d.classical.energies.front(), -0.2);
  EXPECT_DOUBLE_EQ(d.classical.energies.back(), 2.0);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("[model]\nZ = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[nosuch]\nA = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nA = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("[model]\nC = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("[basis]\nschemes = 3d\n"), ConfigError);
  EXPECT_THROW(parse_config("", {{"stats.bin_size", "10"}}), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST(Config, CanonicalTextRoundTripsAndHashIgnoresOutput) {
  auto c = parse_config("[model]\nB = 0.62\nhbar = 0.01\n[stats]\nbin_size = 500\n");
  const auto text = to_ini(c);
  const auto back = parse_config(text);
  EXPECT_EQ(to_ini(back), text);
  EXPECT_EQ(config_hash(back), config_hash(c));
  auto other = c;
  other.output.dir = "elsewhere";
  other.output.threads = 8;
  EXPECT_EQ(config_hash(other), config_hash(c));
  other.stats.seed = 2;
  EXPECT_NE(config_hash(other), config_hash(c));
  // kappa is an input alias for hbar and is not written back.
  for (const auto& k : config_keys())
    if (k != "model.kappa") EXPECT_NE(text.find(k.substr(k.find('.') + 1)), std::string::npos) << k;
}
