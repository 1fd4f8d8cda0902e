#include "dgt/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace dgt {

using nlohmann::json;

namespace {

const std::vector<Strategy> kGroupAndComplete{Strategy::complete, Strategy::cca, Strategy::rnd_max,
                                              Strategy::rnd_mean};
const std::vector<Strategy> kAllStrategies{Strategy::no_testing, Strategy::complete, Strategy::cca, Strategy::rnd_max,
                                           Strategy::rnd_mean};

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  throw ConfigError(ConfigError::Kind::invalid_value, "config key '" + key + "': " + why);
}

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& key, const std::string& name, const std::pair<const char*, Enum> (&table)[N]) {
  for (const auto& [text, value] : table)
    if (name == text) return value;
  std::string allowed;
  for (const auto& [text, value] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(text);
  invalid(key, "'" + name + "' is not one of " + allowed);
}

constexpr std::pair<const char*, Strategy> kStrategyNames[] = {{"no_testing", Strategy::no_testing},
                                                               {"complete", Strategy::complete},
                                                               {"cca", Strategy::cca},
                                                               {"rnd_max", Strategy::rnd_max},
                                                               {"rnd_mean", Strategy::rnd_mean}};
constexpr std::pair<const char*, RunMode> kModeNames[] = {{"min_tests_search", RunMode::min_tests_search},
                                                          {"fixed_budget", RunMode::fixed_budget},
                                                          {"model_comparison", RunMode::model_comparison}};
constexpr std::pair<const char*, DecoderKind> kDecoderNames[] = {
    {"dd", DecoderKind::dd}, {"comp", DecoderKind::comp}, {"map", DecoderKind::map}};
constexpr std::pair<const char*, CcaRule> kCcaRuleNames[] = {{"weighted", CcaRule::weighted},
                                                             {"uniform", CcaRule::uniform}};
constexpr std::pair<const char*, ColumnWeightRule> kColumnWeightNames[] = {
    {"ln2_times", ColumnWeightRule::ln2_times}, {"ln2_divides", ColumnWeightRule::ln2_divides}};
constexpr std::pair<const char*, LogBase> kLogBaseNames[] = {{"natural", LogBase::natural},
                                                             {"binary", LogBase::binary}};

double number(const std::string& key, const json& v) {
  if (!v.is_number()) invalid(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(key, "expected a finite number");
  return x;
}

double probability(const std::string& key, const json& v) {
  const double x = number(key, v);
  if (x < 0.0 || x > 1.0) invalid(key, "must lie in [0, 1]");
  return x;
}

std::uint64_t count(const std::string& key, const json& v, std::uint64_t min) {
  if (!v.is_number_integer()) invalid(key, "expected a non-negative integer");
  if (v.is_number_unsigned()) {
    const auto x = v.get<std::uint64_t>();
    if (x < min) invalid(key, "must be at least " + std::to_string(min));
    return x;
  }
  const auto x = v.get<std::int64_t>();
  if (x < 0 || static_cast<std::uint64_t>(x) < min) invalid(key, "must be at least " + std::to_string(min));
  return static_cast<std::uint64_t>(x);
}

std::string text(const std::string& key, const json& v) {
  if (!v.is_string()) invalid(key, "expected a string");
  return v.get<std::string>();
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const json& v) {
  if (key == "N") cfg.model.population = count(key, v, 1);
  else if (key == "C") cfg.model.community_size = count(key, v, 1);
  else if (key == "p_init") cfg.model.p_init = probability(key, v);
  else if (key == "q1") cfg.model.q_intra = probability(key, v);
  else if (key == "q2") cfg.model.q_inter = probability(key, v);
  else if (key == "r") cfg.model.recovery = probability(key, v);
  else if (key == "eta") {
    if (v.is_null()) cfg.model.eta.reset();
    else if (const double eta = number(key, v); eta >= 1.0) cfg.model.eta = eta;
    else invalid(key, "must be at least 1");
  } else if (key == "strategies") {
    std::vector<std::string> names;
    if (v.is_string()) names.push_back(v.get<std::string>());
    else if (v.is_array())
      for (const auto& item : v) names.push_back(text(key, item));
    else invalid(key, "expected a strategy name or a list of them");
    if (names.empty()) invalid(key, "at least one strategy is required");
    cfg.strategies.clear();
    for (const auto& name : names) cfg.strategies.push_back(parse_enum(key, name, kStrategyNames));
  } else if (key == "experiment") cfg.mode = parse_enum(key, text(key, v), kModeNames);
  else if (key == "decoder") cfg.decoder = parse_enum(key, text(key, v), kDecoderNames);
  else if (key == "cca_rule") cfg.cca_rule = parse_enum(key, text(key, v), kCcaRuleNames);
  else if (key == "column_weight_rule") cfg.column_weight_rule = parse_enum(key, text(key, v), kColumnWeightNames);
  else if (key == "log_base") cfg.bounds.log_base = parse_enum(key, text(key, v), kLogBaseNames);
  else if (key == "horizon") cfg.horizon = count(key, v, 1);
  else if (key == "trajectories") cfg.trajectories = count(key, v, 1);
  else if (key == "seed") cfg.seed = count(key, v, 0);
  else if (key == "threads") cfg.threads = count(key, v, 0);
  else if (key == "out") cfg.out = text(key, v);
  else if (key == "start_tests") cfg.search.start_tests = count(key, v, 1);
  else if (key == "coarse_divisor") cfg.search.coarse_divisor = count(key, v, 1);
  else if (key == "delta") {
    cfg.bounds.delta = number(key, v);
    if (cfg.bounds.delta < 0.0) invalid(key, "must be non-negative");
  } else if (key == "heuristic_multiplier") {
    cfg.bounds.heuristic_multiplier = number(key, v);
    if (cfg.bounds.heuristic_multiplier <= 0.0) invalid(key, "must be positive");
  } else if (key == "enumeration_cap") {
    cfg.enumeration_cap = count(key, v, 1);
    if (cfg.enumeration_cap > 30) invalid(key, "must be at most 30");
  } else throw ConfigError(ConfigError::Kind::unknown_key, "unknown config key '" + key + "'");
}

ExperimentConfig resolve(const json& doc, const std::optional<std::string>& preset_override) {
  if (!doc.is_object()) throw ConfigError(ConfigError::Kind::unreadable, "config must be a JSON object");
  // a manifest nests the resolved config
  const json& flat = doc.contains("config") && doc["config"].is_object() ? doc["config"] : doc;

  std::optional<std::string> preset = preset_override;
  if (!preset && flat.contains("preset") && !flat["preset"].is_null()) preset = text("preset", flat["preset"]);
  ExperimentConfig cfg = preset ? preset_config(*preset) : ExperimentConfig{};
  for (const auto& [key, value] : flat.items())
    if (key != "preset") apply_key(cfg, key, value);
  validate(cfg);
  return cfg;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x == 0.0 ? 0.0 : x);  // no "-0.000000"
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << contents;
  os.close();
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::min_tests_search: return "min_tests_search";
    case RunMode::fixed_budget: return "fixed_budget";
    case RunMode::model_comparison: return "model_comparison";
  }
  return "?";
}

Policy ExperimentConfig::policy(Strategy s) const {
  Policy p;
  p.strategy = s;
  p.experiment = mode == RunMode::min_tests_search ? Experiment::min_tests_search : Experiment::fixed_budget;
  p.decoder = decoder;
  p.search = search;
  p.cca_rule = cca_rule;
  p.column_weight_rule = column_weight_rule;
  p.bounds = bounds;
  p.enumeration_cap = enumeration_cap;
  return p;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1", "fig4a", "fig4b", "fig6a", "fig6b", "fig7"};
  return names;
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset = name;
  cfg.out = "out/" + name;
  if (name == "fig1") {
    cfg.strategies = {Strategy::no_testing, Strategy::complete};
  } else if (name == "fig4a" || name == "fig4b") {
    cfg.mode = RunMode::min_tests_search;
    cfg.strategies = kGroupAndComplete;
    if (name == "fig4a") {
      cfg.model.community_size = 20;
      cfg.model.q_intra = 0.03;
    }
  } else if (name == "fig6a" || name == "fig6b") {
    cfg.strategies = kAllStrategies;
    if (name == "fig6b") {
      cfg.model.population = 5000;
      cfg.model.q_inter = 8e-5;
    }
  } else if (name == "fig7") {
    cfg.mode = RunMode::model_comparison;
    cfg.strategies = {Strategy::no_testing};
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError(ConfigError::Kind::invalid_value, "unknown preset '" + name + "' (known: " + known + ")");
  }
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::optional<std::string>& preset_override) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::unreadable, std::string("config is not valid JSON: ") + e.what());
  }
  return resolve(doc, preset_override);
}

ExperimentConfig parse_config_file(const std::filesystem::path& path, const std::optional<std::string>& preset_override) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(ConfigError::Kind::unreadable, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), preset_override);
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& json_value) {
  if (key == "preset") throw ConfigError(ConfigError::Kind::invalid_value, "preset must be chosen before overrides");
  json v;
  try {
    v = json::parse(json_value);
  } catch (const json::parse_error&) {
    v = json_value;  // bare words are strings
  }
  apply_key(cfg, key, v);
}

void validate(const ExperimentConfig& cfg) {
  const ModelParams& m = cfg.model;
  if (m.population == 0) invalid("N", "must be at least 1");
  if (m.community_size == 0) invalid("C", "must be at least 1");
  if (m.population % m.community_size != 0)
    throw ConfigError(ConfigError::Kind::indivisible_population,
                      "community size C=" + std::to_string(m.community_size) + " does not divide N=" +
                          std::to_string(m.population));
  try {
    validate(m);
  } catch (const InvalidParams& e) {
    throw ConfigError(ConfigError::Kind::invalid_value, std::string("model parameters: ") + e.what());
  }
  if (cfg.horizon == 0) invalid("horizon", "must be at least 1");
  if (cfg.trajectories == 0) invalid("trajectories", "must be at least 1");
  if (cfg.strategies.empty()) invalid("strategies", "at least one strategy is required");
  if (cfg.out.empty()) invalid("out", "must name a directory");
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j = json::object();
  if (cfg.preset) j["preset"] = *cfg.preset;
  j["N"] = cfg.model.population;
  j["C"] = cfg.model.community_size;
  j["p_init"] = cfg.model.p_init;
  j["q1"] = cfg.model.q_intra;
  j["q2"] = cfg.model.q_inter;
  j["r"] = cfg.model.recovery;
  j["eta"] = cfg.model.eta ? json(*cfg.model.eta) : json(nullptr);
  j["strategies"] = json::array();
  for (Strategy s : cfg.strategies) j["strategies"].push_back(std::string(to_string(s)));
  j["experiment"] = std::string(to_string(cfg.mode));
  j["decoder"] = std::string(to_string(cfg.decoder));
  j["cca_rule"] = cfg.cca_rule == CcaRule::weighted ? "weighted" : "uniform";
  j["column_weight_rule"] = cfg.column_weight_rule == ColumnWeightRule::ln2_times ? "ln2_times" : "ln2_divides";
  j["log_base"] = cfg.bounds.log_base == LogBase::natural ? "natural" : "binary";
  j["start_tests"] = cfg.search.start_tests;
  j["coarse_divisor"] = cfg.search.coarse_divisor;
  j["delta"] = cfg.bounds.delta;
  j["heuristic_multiplier"] = cfg.bounds.heuristic_multiplier;
  j["enumeration_cap"] = cfg.enumeration_cap;
  j["horizon"] = cfg.horizon;
  j["trajectories"] = cfg.trajectories;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out;
  return j.dump(2);
}

Strategy parse_strategy(const std::string& name) { return parse_enum("strategies", name, kStrategyNames); }

std::string format_csv(const Aggregate& agg) {
  std::string out = "day,mean_infected,mean_tests,mean_false_neg,mean_false_pos,mean_isolated,entropy_lb,p_min,p_mean,p_max\n";
  for (const DayMeans& d : agg.days) {
    out += std::to_string(d.day);
    for (double x : {d.infected, d.tests, d.false_negatives, d.false_positives, d.isolated, d.entropy_lb, d.p_min,
                     d.p_mean, d.p_max})
      out += "," + fixed6(x);
    out += '\n';
  }
  return out;
}

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg, std::ostream* progress) {
  validate(cfg);
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  const bool created_dir = !fs::exists(dir);
  fs::create_directories(dir);

  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& contents) {
    const fs::path path = dir / name;
    written.push_back(path);
    write_file(path, contents);
  };

  try {
    if (cfg.mode == RunMode::model_comparison) {
      Policy none;
      none.strategy = Strategy::no_testing;
      const Aggregate discrete = monte_carlo(cfg.model, none, cfg.horizon, cfg.trajectories, cfg.seed, cfg.threads);
      const auto continuous = mean_gillespie_curve(cfg.model, cfg.horizon, cfg.trajectories, cfg.seed, cfg.threads);
      std::string d = "day,mean_infected\n", c = "day,mean_infected\n";
      for (std::size_t t = 0; t < cfg.horizon; ++t) {
        d += std::to_string(t) + "," + fixed6(discrete.days[t].infected) + "\n";
        c += std::to_string(t) + "," + fixed6(continuous[t]) + "\n";
      }
      emit("discrete.csv", d);
      emit("continuous.csv", c);
      if (progress) *progress << "model comparison: done\n";
    } else {
      for (Strategy s : cfg.strategies) {
        const Aggregate agg = monte_carlo(cfg.model, cfg.policy(s), cfg.horizon, cfg.trajectories, cfg.seed, cfg.threads);
        emit(std::string(to_string(s)) + ".csv", format_csv(agg));
        if (progress) *progress << to_string(s) << ": done\n";
      }
    }
    json manifest;
    manifest["version"] = DGT_VERSION;
    manifest["seed"] = cfg.seed;
    manifest["config"] = json::parse(config_to_json(cfg));
    emit("manifest.json", manifest.dump(2) + "\n");
  } catch (...) {
    std::error_code ignored;
    for (const auto& path : written) fs::remove(path, ignored);
    if (created_dir) fs::remove(dir, ignored);
    throw;
  }
  return written;
}

}  // namespace dgt
