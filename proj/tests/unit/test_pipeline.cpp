#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "gcm/compare.hpp"
#include "gcm/hashing.hpp"
#include "gcm/io.hpp"
#include "gcm/log.hpp"
#include "gcm/pipeline.hpp"

using namespace gcm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gcm_pipeline_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Certification is off: at this size only a few dozen levels would pass,
// and these tests exercise the plumbing.
RunConfig small_config(const fs::path& out) {
  auto c = parse_config(
      "[model]\nA = -1\nB = 1.09\nC = 1\nkappa = 0.01\n"
      "[basis]\nschemes = all\ndimension = 300\ntail_certification = false\n"
      "dimension_certification = false\n"
      "[stats]\nbin_size = 60\nshift = 20\nbias_trials = 20\nhistogram_bins = 0\n"
      "[classical]\nt_max = 200\ncount = 6\nenergies = 0, 0.5\n"
      "[density]\nlevels = 0, 2\npoints = 41\n");
  c.output.dir = out;
  c.output.cache_dir = out / "cache";
  return c;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(GCMLAB_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Pipeline : public ::testing::Test {
 protected:
  void SetUp() override { set_log_sink([](LogLevel, const std::string&) {}); }
  void TearDown() override { set_log_sink(nullptr); }
};

}  // namespace

TEST_F(Pipeline, SpectrumWritesFilesManifestAndCache) {
  const auto out = fresh_dir("spectrum");
  {
    RunContext ctx("spectrum", small_config(out));
    cmd_spectrum(ctx);
    ctx.finish();
    EXPECT_EQ(ctx.manifest().cache_misses.size(), 3u);
    EXPECT_TRUE(ctx.manifest().cache_hits.empty());
  }
  for (const char* f : {"spectrum_2d-even.csv", "spectrum_2d-odd.csv", "spectrum_5d.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  const auto t = read_csv(out / "spectrum_5d.csv");
  EXPECT_TRUE(t.meta("config_hash"));
  EXPECT_TRUE(t.meta("version"));
  EXPECT_EQ(t.rows.size(), 300u);

  const auto m = RunManifest::from_json(slurp(out / "manifest.json"));
  EXPECT_EQ(m.files.size(), 3u);
  for (const auto& f : m.files) EXPECT_EQ(f.sha256, sha256_file(out / f.path));
  EXPECT_FALSE(m.stages.empty());

  const std::string before = slurp(out / "spectrum_2d-even.csv");
  RunContext again("spectrum", small_config(out));
  cmd_spectrum(again);
  EXPECT_EQ(again.manifest().cache_hits.size(), 3u);
  EXPECT_TRUE(again.manifest().cache_misses.empty());
  for (const auto& s : again.manifest().stages) EXPECT_EQ(s.name.find("eigensolve"), std::string::npos);
  EXPECT_EQ(slurp(out / "spectrum_2d-even.csv"), before);
}

TEST_F(Pipeline, ManifestReRunIsByteIdentical) {
  const auto a = fresh_dir("rerun_a");
  const auto b = fresh_dir("rerun_b");
  RunContext ctx("brody", small_config(a));
  cmd_brody(ctx);
  ctx.finish();
  const auto m = RunManifest::from_json(slurp(a / "manifest.json"));
  auto cfg = parse_config(m.config_text);
  cfg.output.dir = b;
  EXPECT_EQ(config_hash(cfg), m.config_hash);
  RunContext re("brody", cfg);
  cmd_brody(re);
  re.finish();
  for (const auto& f : m.files) EXPECT_EQ(slurp(a / f.path), slurp(b / f.path)) << f.path;
  EXPECT_TRUE(fs::exists(a / "brody_2d-even_adjunct.csv"));
  EXPECT_TRUE(fs::exists(a / "nns_5d_bin0.csv"));
}

TEST_F(Pipeline, BrodyFromExternalLevelList) {
  const auto out = fresh_dir("external");
  const auto list = out / "levels.txt";
  {
    std::ofstream f(list);
    double e = 0.0;
    for (const double s : brody_sample(1.0, 400, 3)) f << (e += s) << "\n";
  }
  auto cfg = small_config(out);
  RunContext ctx("brody", cfg);
  cmd_brody(ctx, list);
  const auto t = read_csv(out / "brody_external.csv");
  EXPECT_GT(t.rows.size(), 5u);
  RunContext bad("brody", cfg);
  EXPECT_THROW(cmd_brody(bad, out / "missing.txt"), UsageError);
}

TEST_F(Pipeline, ClassicalAndCompare) {
  const auto out = fresh_dir("classical");
  auto cfg = small_config(out);
  cfg.model.B = 0.0;
  RunContext ctx("classical", cfg);
  cmd_classical(ctx);
  const auto pts = read_freg_csv(out / "freg.csv");
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& p : pts) EXPECT_EQ(p.f_reg, 1.0);

  // Seed determinism.
  const std::string first = slurp(out / "freg.csv");
  RunContext again("classical", cfg);
  cmd_classical(again);
  EXPECT_EQ(slurp(out / "freg.csv"), first);

  // A synthetic Brody curve spanning a wider range than f_reg: join is
  // restricted to the overlap.
  BrodyCurve c;
  for (int i = 0; i < 12; ++i) {
    BrodyPoint p;
    p.centroid_energy = -0.5 + 0.1 * i;
    p.omega = 0.1 * (i % 4);
    c.points.push_back(p);
  }
  write_brody_csv(out / "brody_syn.csv", c, {});
  RunContext cmp("compare", cfg);
  CompareOptions o;
  o.energy_tol = 0.06;
  const auto r = cmd_compare(cmp, out / "brody_syn.csv", out / "freg.csv", o);
  EXPECT_TRUE(r.restricted);
  EXPECT_EQ(r.points.size(), 2u);
  EXPECT_TRUE(fs::exists(out / "compare.csv"));

  BrodyCurve far;
  BrodyPoint p;
  p.centroid_energy = 10.0;
  far.points = {p, p};
  far.points[1].centroid_energy = 11.0;
  write_brody_csv(out / "brody_far.csv", far, {});
  RunContext cmp2("compare", cfg);
  EXPECT_THROW(cmd_compare(cmp2, out / "brody_far.csv", out / "freg.csv", o), StageError);
}

TEST_F(Pipeline, DensityFilesAndRangeCheck) {
  const auto out = fresh_dir("density");
  auto cfg = small_config(out);
  cfg.basis.schemes = {QuantScheme::FiveD};
  RunContext ctx("density", cfg);
  cmd_density(ctx);
  for (const char* f : {"density_5d_0.csv", "density_5d_0.pgm", "density_5d_0_boundary.csv",
                        "density_5d_2.csv"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  cfg.density.levels = {5000};
  RunContext bad("density", cfg);
  EXPECT_THROW(cmd_density(bad), UsageError);
}

TEST_F(Pipeline, BiasStudyAndFregMap) {
  const auto out = fresh_dir("bias");
  auto cfg = small_config(out);
  cfg.stats.bin_size = 200;
  RunContext ctx("bias-study", cfg);
  cmd_bias_study(ctx);
  const auto t = read_csv(out / "bias_study.csv");
  EXPECT_EQ(t.rows.size(), cfg.bias_omegas.size());

  cfg.classical.B_grid = {0.0, 0.5};
  cfg.classical.E_grid = {0.0};
  cfg.classical.count = 4;
  RunContext fm("freg-map", cfg);
  cmd_freg_map(fm);
  EXPECT_EQ(read_freg_csv(out / "freg_map.csv").size(), 2u);
}

TEST_F(Pipeline, StageErrorsCarryTags) {
  StageError e("eigensolve:5d", "boom");
  EXPECT_EQ(std::string(e.what()), "[eigensolve:5d] boom");
  RunContext ctx("spectrum", small_config(fresh_dir("tags")));
  try {
    ctx.stage("unfold", []() -> int { throw std::runtime_error("bad"); });
    FAIL();
  } catch (const StageError& s) {
    EXPECT_EQ(s.stage(), "unfold");
  }
}

TEST(Cli, ExitCodes) {
  if (std::string(GCMLAB_PATH).empty()) GTEST_SKIP() << "command-line tool not built";
  const auto out = fresh_dir("cli");
  const std::string common = " --out " + out.string() + " --cache-dir " + (out / "cache").string();
  EXPECT_EQ(run_tool("spectrum --kappa 0.01 --dimension 100 --schemes 2d-even" + common), 0);
  EXPECT_TRUE(fs::exists(out / "spectrum_2d-even.csv"));
  EXPECT_EQ(run_tool("spectrum --schemes 3d" + common), 2);
  EXPECT_EQ(run_tool("spectrum --set model.Q=1" + common), 2);
  EXPECT_EQ(run_tool("nosuchcommand"), 2);
  EXPECT_EQ(run_tool("compare --brody " + (out / "none.csv").string() + " --freg " +
                     (out / "none.csv").string() + common),
            2);
  // Re-running from the written manifest reproduces the output.
  const std::string before = slurp(out / "spectrum_2d-even.csv");
  EXPECT_EQ(run_tool("spectrum --config " + (out / "manifest.json").string() + common), 0);
  EXPECT_EQ(slurp(out / "spectrum_2d-even.csv"), before);
  EXPECT_EQ(run_tool("brody --kappa 0.01 --dimension 100 --bin-size 60 --shift 10 "
                     "--set stats.histogram_bins=1000" + common),
            2);
  // Computational failure (exit 1): the two curves share no energy range.
  {
    std::ofstream b(out / "brody.csv");
    b << "centroid_energy,omega,stat_err,bin_start,bin_size,flags\n"
         "10,0.5,0,0,100,ok\n11,0.5,0,0,100,ok\n";
    std::ofstream f(out / "freg.csv");
    f << "B,E,f_reg,sigma,n_regular,n_chaotic,n_undecided\n0,0,1,0,5,0,0\n0,1,1,0,5,0,0\n";
  }
  EXPECT_EQ(run_tool("compare --brody " + (out / "brody.csv").string() + " --freg " +
                     (out / "freg.csv").string() + common),
            1);
}
