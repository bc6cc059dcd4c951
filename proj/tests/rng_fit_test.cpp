#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "stratsp/config.hpp"
#include "stratsp/fit.hpp"
#include "stratsp/report.hpp"
#include "stratsp/rng.hpp"

using namespace stratsp;

TEST(Rng, DeterministicPerSeedAndStream) {
  Rng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool stream_differs = false, seed_differs = false;
  for (int i = 0; i < 64; i++) {
    std::uint64_t va = a.next();
    EXPECT_EQ(va, b.next());
    if (va != c.next()) stream_differs = true;
    if (va != d.next()) seed_differs = true;
  }
  EXPECT_TRUE(stream_differs);
  EXPECT_TRUE(seed_differs);
}

TEST(Rng, Uniform01InRange) {
  Rng r(7);
  for (int i = 0; i < 10000; i++) {
    double u = r.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, UniformIntBoundsAndCoverage) {
  Rng r(11);
  std::set<int> seen;
  for (int i = 0; i < 5000; i++) {
    int v = r.uniform_int(7);
    ASSERT_GE(v, 0);
    ASSERT_LT(v, 7);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, UnitDiskStaysInDisk) {
  Rng r(5);
  for (int i = 0; i < 2000; i++) EXPECT_LE(std::abs(r.unit_disk()), 1.0 + 1e-15);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng r(9);
  std::vector<int> v(50);
  for (int i = 0; i < 50; i++) v[i] = i;
  r.shuffle(v);
  std::set<int> s(v.begin(), v.end());
  EXPECT_EQ(s.size(), 50u);
}

TEST(Fit, RecoversExactLine) {
  std::vector<double> x, y;
  for (int i = 0; i < 20; i++) {
    x.push_back(i);
    y.push_back(3.5 * i - 2.0);
  }
  LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 3.5, 1e-12);
  EXPECT_NEAR(f.intercept, -2.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.n, 20);
}

TEST(Fit, NoiseLowersR2) {
  Rng r(3);
  std::vector<double> x, y;
  for (int i = 0; i < 40; i++) {
    x.push_back(i);
    y.push_back(0.5 * i + 5.0 * r.symmetric());
  }
  LineFit f = fit_line(x, y);
  EXPECT_LT(f.r2, 1.0);
  EXPECT_NEAR(f.slope, 0.5, 0.3);
}

TEST(Config, DefaultsValidate) {
  Config cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.get_string("model.kind"), "torus");
  EXPECT_EQ(cfg.get_int("model.n"), 16);
}

TEST(Config, UnknownKeyRejected) {
  Config cfg;
  EXPECT_THROW(cfg.set("model.bogus", "1"), ConfigError);
  EXPECT_THROW(cfg.get_string("nope.nope"), ConfigError);
}

TEST(Config, ScaleConsistencyEnforced) {
  Config cfg;
  cfg.set("scales.mu", "0.5");
  cfg.set("scales.nu", "3");
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.set("scales.nu", "2");
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, FileRoundTrip) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "stratsp_cfg_test";
  fs::create_directories(dir);
  fs::path file = dir / "a.cfg";
  {
    std::ofstream out(file);
    out << "# comment\n[model]\nkind = heisenberg\nn = 3\n[run]\nseed = 99\n";
  }
  Config cfg = Config::from_file(file.string());
  EXPECT_EQ(cfg.get_string("model.kind"), "heisenberg");
  EXPECT_EQ(cfg.get_int("model.n"), 3);
  EXPECT_EQ(cfg.get_seed(), 99u);
  {
    std::ofstream out(file);
    out << "kind = torus\n";  // key before any section header
  }
  EXPECT_THROW(Config::from_file(file.string()), ConfigError);
}

TEST(Config, HashTracksContent) {
  Config a, b;
  EXPECT_EQ(a.hash_hex(), b.hash_hex());
  b.set("run.seed", "777");
  EXPECT_NE(a.hash_hex(), b.hash_hex());
  EXPECT_EQ(a.hash_hex().size(), 16u);
}

TEST(Report, G17RoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789e10, -0.0, 2.2250738585072014e-308}) {
    EXPECT_EQ(parse_g17(format_g17(v)), v == 0.0 ? 0.0 : v);
  }
  EXPECT_EQ(format_g17(-0.0), "0");
  EXPECT_EQ(format_g17(INFINITY), "inf");
  EXPECT_TRUE(std::isnan(parse_g17("nan")));
}

TEST(Report, WriteReadRoundTrip) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "stratsp_rep_test";
  fs::create_directories(dir);
  RunReport rep;
  rep.suite = "demo";
  rep.seed = 4;
  rep.add("alpha", 0.125, 1.0, true);
  rep.add("beta_check", 2.0, 1.0, false);
  rep.info("gamma", 1.0 / 3.0);
  std::string path = (dir / "r.csv").string();
  rep.write(path);
  RunReport back = RunReport::read(path);
  EXPECT_EQ(back.suite, "demo");
  EXPECT_EQ(back.seed, 4u);
  ASSERT_EQ(back.rows.size(), 3u);
  EXPECT_EQ(back.rows[0].name, "alpha");
  EXPECT_EQ(back.rows[0].value, 0.125);
  EXPECT_EQ(back.rows[1].verdict, "fail");
  EXPECT_EQ(back.rows[2].value, 1.0 / 3.0);
  EXPECT_FALSE(back.all_pass());
}

TEST(Report, CompareRunsFlagsDifferences) {
  RunReport a, b;
  a.suite = b.suite = "demo";
  a.add("x", 2.0, 1.0, true);
  a.add("only_a", 1.0, 1.0, true);
  b.add("x", 4.0, 1.0, false);
  b.add("only_b", 3.0, 1.0, true);
  auto rows = compare_runs(a, b);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].name, "x");
  EXPECT_DOUBLE_EQ(rows[0].ratio, 2.0);
  EXPECT_EQ(rows[0].note, "verdict_changed");
  EXPECT_EQ(rows[1].note, "absent_in_b");
  EXPECT_EQ(rows[2].note, "absent_in_a");
  RunReport c;
  c.suite = "other";
  EXPECT_THROW(compare_runs(a, c), std::runtime_error);
}

TEST(Report, IdenticalReportsCompareToUnitRatios) {
  RunReport a;
  a.suite = "demo";
  a.add("u", 1.5, 2.0, true);
  a.add("v", 0.0, 1.0, true);
  auto rows = compare_runs(a, a);
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.ratio, 1.0);
    EXPECT_EQ(r.note, "");
  }
}
