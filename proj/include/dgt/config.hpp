#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgt/pipeline.hpp"

namespace dgt {

/// What a run produces: per-strategy testing curves, or the discrete model
/// against its continuous-time counterpart.
enum class RunMode { min_tests_search, fixed_budget, model_comparison };

std::string_view to_string(RunMode m);

struct ExperimentConfig {
  std::optional<std::string> preset;
  ModelParams model;
  std::vector<Strategy> strategies{Strategy::no_testing, Strategy::complete};
  RunMode mode = RunMode::fixed_budget;
  DecoderKind decoder = DecoderKind::dd;
  CcaRule cca_rule = CcaRule::weighted;
  ColumnWeightRule column_weight_rule = ColumnWeightRule::ln2_times;
  SearchGranularity search;
  BoundParams bounds;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t horizon = 50;
  std::size_t trajectories = 200;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out = "out";

  /// Policy for one strategy; undefined for model_comparison runs.
  Policy policy(Strategy s) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { unreadable, unknown_key, invalid_value, indivisible_population };
  ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Names accepted by `preset`.
const std::vector<std::string>& preset_names();

/// Defaults of a named preset; throws ConfigError for an unknown name.
ExperimentConfig preset_config(const std::string& name);

/// Resolves a flat JSON object into a config. A "preset" key (or
/// `preset_override`) selects the base values; every other key overrides
/// them. A manifest written by run_experiment is accepted as well.
ExperimentConfig parse_config_text(const std::string& text, const std::optional<std::string>& preset_override = {});
ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   const std::optional<std::string>& preset_override = {});

/// Applies one key as if it appeared in a config file.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& json_value);

/// Throws ConfigError if the config is unusable.
void validate(const ExperimentConfig& cfg);

/// The config as the flat JSON object parse_config_text reads back.
std::string config_to_json(const ExperimentConfig& cfg);

Strategy parse_strategy(const std::string& name);

/// Runs every configured strategy and writes `<strategy>.csv` plus
/// `manifest.json` into cfg.out (`discrete.csv` and `continuous.csv` for a
/// model comparison). Files already written are removed if a later step fails.
/// Returns the paths written.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg, std::ostream* progress = nullptr);

/// CSV text of per-day means, six decimals.
std::string format_csv(const Aggregate& agg);

}  // namespace dgt
