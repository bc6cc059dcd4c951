// End-to-end checks for the experiment runner: suite dispatch, output files,
// reproducibility of numeric rows, budget handling, and report round-trips.
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratsp/config.hpp"
#include "stratsp/harness.hpp"
#include "stratsp/report.hpp"

using namespace stratsp;
namespace fs = std::filesystem;

namespace {

// Fresh output directory under the test temp root.
std::string scratch_dir(const std::string& tag) {
  fs::path p = fs::path(::testing::TempDir()) / ("stratsp_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

Config small_torus_config(const std::string& out_dir) {
  Config cfg;
  cfg.set("model.kind", "torus");
  cfg.set("model.d", "1");
  cfg.set("model.n", "16");
  cfg.set("run.out", out_dir);
  cfg.validate();
  return cfg;
}

// File content with comment lines stripped. Comments carry the config echo
// (which includes run.out) and wall-clock, so only data rows are comparable
// across output directories.
std::vector<std::string> data_lines(const std::string& path) {
  std::ifstream in(path);
  EXPECT_TRUE(in.good()) << path;
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') out.push_back(line);
  return out;
}

const CheckRow* find_row(const RunReport& rep, const std::string& name) {
  for (const auto& r : rep.rows)
    if (r.name == name) return &r;
  return nullptr;
}

}  // namespace

TEST(Runner, SpectralSuiteRunsCleanOnSmallTorus) {
  std::string dir = scratch_dir("spectral_clean");
  Config cfg = small_torus_config(dir);
  RunReport rep = run_experiment(cfg, "spectral");
  EXPECT_EQ(rep.suite, "spectral");
  EXPECT_TRUE(rep.all_pass());
  EXPECT_FALSE(rep.partial);
  EXPECT_NE(find_row(rep, "reconstruction_rel_err"), nullptr);
  EXPECT_TRUE(fs::exists(fs::path(dir) / "spectral.csv"));
  EXPECT_TRUE(fs::exists(fs::path(dir) / "spectral_report.csv"));
}

TEST(Runner, HeatSuiteRunsCleanOnSmallTorus) {
  std::string dir = scratch_dir("heat_clean");
  Config cfg = small_torus_config(dir);
  RunReport rep = run_experiment(cfg, "heat");
  EXPECT_TRUE(rep.all_pass());
  EXPECT_TRUE(fs::exists(fs::path(dir) / "heat.csv"));
}

TEST(Runner, SameConfigAndSeedReproduceNumericRows) {
  std::string dir_a = scratch_dir("repro_a");
  std::string dir_b = scratch_dir("repro_b");
  Config a = small_torus_config(dir_a);
  Config b = small_torus_config(dir_b);
  run_experiment(a, "spectral");
  run_experiment(b, "spectral");
  EXPECT_EQ(data_lines(dir_a + "/spectral.csv"), data_lines(dir_b + "/spectral.csv"));
  EXPECT_EQ(data_lines(dir_a + "/spectral_report.csv"),
            data_lines(dir_b + "/spectral_report.csv"));
}

TEST(Runner, DifferentSeedStillReproducesSpectralGeometry) {
  // The spectral suite is seed-free in its numeric columns: eigenvalues depend
  // only on the model, so changing run.seed must not move the CSV body.
  std::string dir_a = scratch_dir("seedfree_a");
  std::string dir_b = scratch_dir("seedfree_b");
  Config a = small_torus_config(dir_a);
  Config b = small_torus_config(dir_b);
  b.set("run.seed", "987654321");
  run_experiment(a, "spectral");
  run_experiment(b, "spectral");
  EXPECT_EQ(data_lines(dir_a + "/spectral.csv"), data_lines(dir_b + "/spectral.csv"));
}

TEST(Runner, SpectrumAliasMatchesSpectralSuite) {
  std::string dir_a = scratch_dir("alias_a");
  std::string dir_b = scratch_dir("alias_b");
  Config a = small_torus_config(dir_a);
  Config b = small_torus_config(dir_b);
  RunReport ra = run_experiment(a, "spectral");
  RunReport rb = run_experiment(b, "spectrum");
  EXPECT_EQ(rb.suite, "spectral");
  ASSERT_EQ(ra.rows.size(), rb.rows.size());
  for (size_t i = 0; i < ra.rows.size(); i++) {
    EXPECT_EQ(ra.rows[i].name, rb.rows[i].name);
    EXPECT_EQ(ra.rows[i].verdict, rb.rows[i].verdict);
  }
}

TEST(Runner, UnknownSuiteIsRejected) {
  std::string dir = scratch_dir("unknown_suite");
  Config cfg = small_torus_config(dir);
  EXPECT_THROW(run_experiment(cfg, "nonsense"), std::invalid_argument);
}

TEST(Runner, MismatchedScalePairIsRejected) {
  std::string dir = scratch_dir("bad_scales");
  Config cfg = small_torus_config(dir);
  cfg.set("scales.nu", "3");  // mu stays 0.5, so nu != 1/mu
  EXPECT_THROW(run_experiment(cfg, "spectral"), ConfigError);
}

TEST(Runner, ZeroBudgetStopsSparseCheckAfterConstruction) {
  std::string dir = scratch_dir("budget_zero");
  Config cfg = small_torus_config(dir);
  cfg.set("run.budget_seconds", "0");
  RunReport rep = run_experiment(cfg, "sparse-check");
  EXPECT_TRUE(rep.partial);
  const CheckRow* flagged = find_row(rep, "budget_exceeded_seconds");
  ASSERT_NE(flagged, nullptr);
  EXPECT_EQ(flagged->verdict, "flagged");
  // The family is still built and verified before the stop...
  EXPECT_NE(find_row(rep, "family_disjoint"), nullptr);
  // ...but the trial phase never runs.
  EXPECT_EQ(find_row(rep, "max_ratio_finite"), nullptr);

  // The partial marker survives the disk round trip.
  RunReport back = RunReport::read(dir + "/sparse_check_report.csv");
  EXPECT_TRUE(back.partial);
  EXPECT_EQ(back.suite, "sparse-check");
}

TEST(Runner, SparseCheckCompletesWithinGenerousBudget) {
  std::string dir = scratch_dir("sparse_full");
  Config cfg = small_torus_config(dir);
  cfg.set("run.trials", "10");
  RunReport rep = run_experiment(cfg, "sparse-check");
  EXPECT_FALSE(rep.partial);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_NE(find_row(rep, "max_ratio_finite"), nullptr);
  EXPECT_TRUE(fs::exists(fs::path(dir) / "sparse_check.csv"));
}

TEST(Reports, RoundTripThroughDisk) {
  std::string dir = scratch_dir("report_rt");
  RunReport rep;
  rep.suite = "spectral";
  rep.seed = 424242;
  rep.wall_ms = 12.5;
  rep.partial = true;
  rep.add("alpha", 0.25, 1e-10, false);
  rep.add("beta", 0.0, 0.0, true);
  rep.info("gamma", 1.0 / 3.0);
  rep.flag("delta", 9e99);
  std::string path = dir + "/report_rt.csv";
  rep.write(path);

  RunReport back = RunReport::read(path);
  EXPECT_EQ(back.suite, rep.suite);
  EXPECT_EQ(back.seed, rep.seed);
  EXPECT_DOUBLE_EQ(back.wall_ms, rep.wall_ms);
  EXPECT_TRUE(back.partial);
  ASSERT_EQ(back.rows.size(), rep.rows.size());
  for (size_t i = 0; i < rep.rows.size(); i++) {
    EXPECT_EQ(back.rows[i].name, rep.rows[i].name);
    EXPECT_EQ(back.rows[i].verdict, rep.rows[i].verdict);
    EXPECT_DOUBLE_EQ(back.rows[i].value, rep.rows[i].value);  // 17 digits round-trip
    if (std::isnan(rep.rows[i].threshold))
      EXPECT_TRUE(std::isnan(back.rows[i].threshold));
    else
      EXPECT_DOUBLE_EQ(back.rows[i].threshold, rep.rows[i].threshold);
  }
  EXPECT_FALSE(back.all_pass());  // the failing row survives
}

TEST(Reports, SeventeenDigitFormatRoundTripsExactly) {
  for (double v : {1.0 / 3.0, 1e-300, -0.0, 2.5e17, 3.141592653589793}) {
    EXPECT_EQ(parse_g17(format_g17(v)), v);
  }
  EXPECT_EQ(format_g17(-0.0), "0");
  EXPECT_TRUE(std::isnan(parse_g17(format_g17(std::nan("")))));
  EXPECT_EQ(parse_g17("inf"), INFINITY);
}

TEST(Reports, CompareFlagsDriftAndAbsentRows) {
  RunReport a, b;
  a.suite = b.suite = "decay";
  a.add("shared", 2.0, 1.0, true);
  b.add("shared", 4.0, 1.0, false);
  a.info("only_a", 1.0);
  b.info("only_b", 7.0);

  auto rows = compare_runs(a, b);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].name, "shared");
  EXPECT_DOUBLE_EQ(rows[0].ratio, 2.0);
  EXPECT_EQ(rows[0].note, "verdict_changed");
  EXPECT_EQ(rows[1].name, "only_a");
  EXPECT_EQ(rows[1].note, "absent_in_b");
  EXPECT_EQ(rows[2].name, "only_b");
  EXPECT_EQ(rows[2].note, "absent_in_a");

  RunReport c;
  c.suite = "weights";
  EXPECT_THROW(compare_runs(a, c), std::runtime_error);
}

TEST(Configs, DefaultsValidateAndHashIsStable) {
  Config cfg;
  cfg.validate();
  EXPECT_EQ(cfg.hash_hex().size(), 16u);
  Config cfg2;
  EXPECT_EQ(cfg.hash_hex(), cfg2.hash_hex());
  cfg2.set("run.seed", "7");
  EXPECT_NE(cfg.hash_hex(), cfg2.hash_hex());
}

TEST(Configs, UnknownKeyAndBadValueAreRejected) {
  Config cfg;
  EXPECT_THROW(cfg.set("nope.key", "1"), ConfigError);
  cfg.set("scales.mu", "0.25");
  EXPECT_THROW(cfg.validate(), ConfigError);  // nu still 2, not 1/mu
  cfg.set("scales.nu", "4");
  cfg.validate();
}
