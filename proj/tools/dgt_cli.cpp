// dgt: run testing experiments, check the property suites, print bounds.
//
// Every `run` flag can also come from the environment as DGT_<FLAG>
// (DGT_CONFIG, DGT_PRESET, DGT_STRATEGY, DGT_TRAJECTORIES, DGT_SEED, DGT_OUT,
// DGT_THREADS); an explicit flag wins over the environment.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dgt/bounds.hpp"
#include "dgt/config.hpp"
#include "dgt/verification.hpp"

namespace {

using namespace dgt;

struct RunOptions {
  std::string config;
  std::string preset;
  std::vector<std::string> strategies;
  std::optional<std::size_t> trajectories;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
  std::vector<std::string> overrides;
};

int run(const RunOptions& o) {
  if (o.config.empty() && o.preset.empty()) {
    std::cerr << "run: give --config, --preset or both\n";
    return 2;
  }
  try {
    const std::optional<std::string> preset = o.preset.empty() ? std::nullopt : std::optional(o.preset);
    ExperimentConfig cfg = o.config.empty() ? parse_config_text("{}", preset) : parse_config_file(o.config, preset);
    if (!o.strategies.empty()) {
      cfg.strategies.clear();
      for (const auto& s : o.strategies) cfg.strategies.push_back(parse_strategy(s));
    }
    if (o.trajectories) set_config_value(cfg, "trajectories", std::to_string(*o.trajectories));
    if (o.seed) cfg.seed = *o.seed;
    if (o.threads) cfg.threads = *o.threads;
    if (!o.out.empty()) cfg.out = o.out;
    for (const auto& kv : o.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError(ConfigError::Kind::invalid_value, "--set expects key=value, got '" + kv + "'");
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(cfg);
    for (const auto& path : run_experiment(cfg, &std::cerr)) std::cout << path.string() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 1;
  }
}

bool print_reports(const std::vector<PropertyReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.checks << " checks, " << r.violations
              << " violations\n";
    if (!r.first_violation.empty()) std::cout << "  first: " << r.first_violation << '\n';
    ok = ok && r.passed();
  }
  return ok;
}

int verify(std::size_t instances, std::size_t trajectories, std::uint64_t seed) {
  StaticSuiteOptions opts;
  opts.instances = instances;
  opts.seed = seed;
  bool ok = print_reports(static_oracle_suite(opts));
  ok = print_reports(monotonicity_grid_suite()) && ok;
  ok = print_reports(prior_boundedness_suite(bounded_prior_params(), trajectories, 50, seed)) && ok;
  return ok ? 0 : 1;
}

int bounds(const std::string& path, const BoundParams& params) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) {
      std::cerr << "cannot read " << path << '\n';
      return 2;
    }
    in = &file;
  }
  std::vector<double> p;
  for (std::string line; std::getline(*in, line);) {
    line = line.substr(0, line.find('#'));
    std::istringstream row(line);
    std::string token;
    while (row >> token) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !(x >= 0.0 && x <= 1.0)) {
        std::cerr << "not a probability: '" << token << "'\n";
        return 2;
      }
      p.push_back(x);
    }
  }
  if (p.empty()) {
    std::cerr << "no priors in " << path << '\n';
    return 2;
  }
  PriorVector pv;
  pv.p = p;
  pv.pool.resize(p.size());
  const double n = static_cast<double>(p.size());
  const double kbar = pv.expected_defectives();
  std::printf("n %zu\nexpected_defectives %.6f\np_min %.6f\np_mean %.6f\np_max %.6f\n", p.size(), kbar, pv.min(),
              pv.mean(), pv.max());
  std::printf("entropy_lower_bound %.6f\n", entropy_lower_bound(pv));
  std::printf("min_prior_lower_bound %.6f\n", min_prior_lower_bound(n, pv.min()));
  if (kbar > 0.0) std::printf("cca_budget %zu\n", cca_budget(n, kbar, params.delta, params.log_base));
  else std::printf("cca_budget undefined (no expected defectives)\n");
  std::printf("heuristic_budget %zu\n", heuristic_budget(p.size(), pv.mean(), params));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic group testing experiments"};
  app.set_version_flag("--version", DGT_CLI_VERSION);
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "run an experiment and write per-strategy CSVs");
  run_cmd->add_option("--config", ro.config, "flat JSON config file")->envname("DGT_CONFIG");
  run_cmd->add_option("--preset", ro.preset, "fig1|fig4a|fig4b|fig6a|fig6b|fig7")->envname("DGT_PRESET");
  run_cmd->add_option("--strategy", ro.strategies, "no_testing|complete|cca|rnd_max|rnd_mean (repeatable)")
      ->delimiter(',')
      ->envname("DGT_STRATEGY");
  run_cmd->add_option("--trajectories", ro.trajectories, "Monte Carlo trajectories")->envname("DGT_TRAJECTORIES");
  run_cmd->add_option("--seed", ro.seed, "base seed")->envname("DGT_SEED");
  run_cmd->add_option("--threads", ro.threads, "worker threads, 0 = all cores")->envname("DGT_THREADS");
  run_cmd->add_option("--out", ro.out, "output directory")->envname("DGT_OUT");
  run_cmd->add_option("--set", ro.overrides, "extra config key=value (repeatable)");

  std::size_t instances = 200, trajectories = 100;
  std::uint64_t seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "run the decoder and prior property suites");
  verify_cmd->add_option("--instances", instances, "random small designs")->capture_default_str();
  verify_cmd->add_option("--trajectories", trajectories, "trajectories for the prior bounds")->capture_default_str();
  verify_cmd->add_option("--seed", seed, "seed")->capture_default_str();

  std::string priors_path;
  BoundParams bp;
  std::string log_base = "natural";
  auto* bounds_cmd = app.add_subcommand("bounds", "print bound values for a prior vector file");
  bounds_cmd->add_option("priors", priors_path, "whitespace-separated priors, '-' for stdin")->required();
  bounds_cmd->add_option("--delta", bp.delta, "coupon-collector error exponent")->capture_default_str();
  bounds_cmd->add_option("--multiplier", bp.heuristic_multiplier, "heuristic budget multiplier")->capture_default_str();
  bounds_cmd->add_option("--log-base", log_base, "natural|binary")
      ->check(CLI::IsMember({"natural", "binary"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) return run(ro);
  if (*verify_cmd) return verify(instances, trajectories, seed);
  bp.log_base = log_base == "binary" ? LogBase::binary : LogBase::natural;
  return bounds(priors_path, bp);
}
