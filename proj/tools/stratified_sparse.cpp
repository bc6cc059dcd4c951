// Command-line experiment runner. One subcommand per suite plus `compare`;
// exit code 0 = all verdicts pass, 2 = some verdict failed, 1 = execution
// error (bad config, missing files, runtime faults).
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stratsp/harness.hpp"
#include "stratsp/report.hpp"

namespace {

struct SuiteArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  // Frequent knobs, mirrored onto --set keys when given.
  double theta = 0.0, beta = 0.0, r1 = 0.0, r2 = 0.0, mu = 0.0, s0 = 0.0;
  double a = 0.0, p = 0.0, q = 0.0, alpha = 0.0, t = 0.0, eta = 0.0;
  long long trials = 0, seed = -1, n = 0, d = 0, k = 0;
  std::string model, mode;
};

void add_common_options(CLI::App* cmd, SuiteArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file (key = value with [sections])");
  cmd->add_option("--set", args.sets, "override, e.g. --set multiplier.beta=3")->take_all();
  cmd->add_option("--out", args.out_dir, "output directory for CSV and report files");
  cmd->add_option("--theta", args.theta, "multiplier.theta");
  cmd->add_option("--beta", args.beta, "multiplier.beta");
  cmd->add_option("--r1", args.r1, "sparse.r1");
  cmd->add_option("--r2", args.r2, "sparse.r2");
  cmd->add_option("--eta", args.eta, "sparse.eta");
  cmd->add_option("--mu", args.mu, "scales.mu (scales.nu follows as 1/mu)");
  cmd->add_option("--model", args.model, "model.kind (torus | heisenberg)");
  cmd->add_option("--n", args.n, "model.n");
  cmd->add_option("--d", args.d, "model.d (torus only)");
  cmd->add_option("--s0", args.s0, "model.s0 spectral scale");
  cmd->add_option("--a", args.a, "weights.a power-weight exponent");
  cmd->add_option("--p", args.p, "weights.p");
  cmd->add_option("--q", args.q, "weights.q");
  cmd->add_option("--mode", args.mode, "quant.mode (i | ii | iii)");
  cmd->add_option("--k", args.k, "riesz.k");
  cmd->add_option("--alpha", args.alpha, "riesz.alpha and dispersive.alpha");
  cmd->add_option("--t", args.t, "riesz.t and dispersive.t");
  cmd->add_option("--trials", args.trials, "run.trials");
  cmd->add_option("--seed", args.seed, "run.seed");
}

std::string fmt(double v) { return stratsp::format_g17(v); }

stratsp::Config build_config(const CLI::App* cmd, const SuiteArgs& args) {
  stratsp::Config cfg = args.config_path.empty()
                            ? stratsp::Config()
                            : stratsp::Config::from_file(args.config_path);
  auto given = [cmd](const std::string& name) { return cmd->count(name) > 0; };
  if (given("--theta")) cfg.set("multiplier.theta", fmt(args.theta));
  if (given("--beta")) cfg.set("multiplier.beta", fmt(args.beta));
  if (given("--r1")) cfg.set("sparse.r1", fmt(args.r1));
  if (given("--r2")) cfg.set("sparse.r2", fmt(args.r2));
  if (given("--eta")) cfg.set("sparse.eta", fmt(args.eta));
  if (given("--mu")) {
    cfg.set("scales.mu", fmt(args.mu));
    cfg.set("scales.nu", fmt(1.0 / args.mu));
  }
  if (given("--model")) cfg.set("model.kind", args.model);
  if (given("--n")) cfg.set("model.n", std::to_string(args.n));
  if (given("--d")) cfg.set("model.d", std::to_string(args.d));
  if (given("--s0")) cfg.set("model.s0", fmt(args.s0));
  if (given("--a")) cfg.set("weights.a", fmt(args.a));
  if (given("--p")) cfg.set("weights.p", fmt(args.p));
  if (given("--q")) cfg.set("weights.q", fmt(args.q));
  if (given("--mode")) cfg.set("quant.mode", args.mode);
  if (given("--k")) cfg.set("riesz.k", std::to_string(args.k));
  if (given("--alpha")) {
    cfg.set("riesz.alpha", fmt(args.alpha));
    cfg.set("dispersive.alpha", fmt(args.alpha));
  }
  if (given("--t")) {
    cfg.set("riesz.t", fmt(args.t));
    cfg.set("dispersive.t", fmt(args.t));
  }
  if (given("--trials")) cfg.set("run.trials", std::to_string(args.trials));
  if (given("--seed")) cfg.set("run.seed", std::to_string(args.seed));
  for (const auto& kv : args.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw stratsp::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.out_dir.empty()) cfg.set("run.out", args.out_dir);
  if (const char* workers = std::getenv("STRATSP_WORKERS"))
    cfg.set("run.workers", workers);
  return cfg;
}

int run_suite(const std::string& suite, const CLI::App* cmd, const SuiteArgs& args) {
  stratsp::Config cfg = build_config(cmd, args);
  stratsp::RunReport rep = stratsp::run_experiment(cfg, suite);
  int fails = 0;
  for (const auto& row : rep.rows) {
    if (row.verdict == "fail") fails++;
    std::cout << row.verdict << "  " << row.name << " = " << stratsp::format_g17(row.value)
              << "\n";
  }
  std::cout << (fails == 0 ? "PASS" : "FAIL") << "  suite=" << rep.suite
            << " checks=" << rep.rows.size() << " wall_ms=" << stratsp::format_g17(rep.wall_ms)
            << (rep.partial ? " (partial: budget exceeded)" : "") << "\n";
  return fails == 0 ? 0 : 2;
}

int run_compare(const std::string& path_a, const std::string& path_b) {
  stratsp::RunReport a = stratsp::RunReport::read(path_a);
  stratsp::RunReport b = stratsp::RunReport::read(path_b);
  auto rows = stratsp::compare_runs(a, b);
  std::cout << "check,value_a,value_b,ratio,note\n";
  for (const auto& r : rows)
    std::cout << r.name << "," << stratsp::format_g17(r.value_a) << ","
              << stratsp::format_g17(r.value_b) << "," << stratsp::format_g17(r.ratio) << ","
              << (r.note.empty() ? "ok" : r.note) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratified-sparse: spectral multiplier and sparse domination experiments"};
  app.require_subcommand(1);

  const std::vector<std::string> suites = {
      "group",     "spectral", "spectrum",     "heat",    "multiplier-check", "decay",
      "riesz",     "dispersive", "grids",      "sparse-check", "weights",    "quantitative"};
  std::vector<SuiteArgs> all_args(suites.size());
  std::vector<CLI::App*> cmds(suites.size());
  for (size_t i = 0; i < suites.size(); i++) {
    cmds[i] = app.add_subcommand(suites[i], "run the " + suites[i] + " suite");
    add_common_options(cmds[i], all_args[i]);
  }

  std::string cmp_a, cmp_b;
  CLI::App* cmp = app.add_subcommand("compare", "diff two report files from the same suite");
  cmp->add_option("report_a", cmp_a, "first report file")->required();
  cmp->add_option("report_b", cmp_b, "second report file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmp->parsed()) return run_compare(cmp_a, cmp_b);
    for (size_t i = 0; i < suites.size(); i++)
      if (cmds[i]->parsed()) return run_suite(suites[i], cmds[i], all_args[i]);
    std::cerr << "error: no subcommand selected\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
