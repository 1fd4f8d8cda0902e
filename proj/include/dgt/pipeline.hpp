#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dgt/bounds.hpp"
#include "dgt/decoders.hpp"
#include "dgt/designs.hpp"
#include "dgt/model.hpp"
#include "dgt/priors.hpp"
#include "dgt/random.hpp"

namespace dgt {

enum class Strategy { no_testing, complete, cca, rnd_max, rnd_mean };

/// min_tests_search: each day, find the fewest tests with which the strategy
/// recovers the day's infections exactly; isolation uses the true statuses.
/// fixed_budget: each day, spend the heuristic budget and act on the decode.
enum class Experiment { min_tests_search, fixed_budget };

enum class DecoderKind { dd, comp, map };

struct SearchGranularity {
  std::size_t start_tests = 1000;
  std::size_t coarse_divisor = 100;  ///< coarse step = max(1, pool / coarse_divisor)

  friend bool operator==(const SearchGranularity&, const SearchGranularity&) = default;
};

struct Policy {
  Strategy strategy = Strategy::complete;
  Experiment experiment = Experiment::fixed_budget;
  DecoderKind decoder = DecoderKind::dd;
  SearchGranularity search;
  CcaRule cca_rule = CcaRule::weighted;
  ColumnWeightRule column_weight_rule = ColumnWeightRule::ln2_times;
  BoundParams bounds;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

std::string_view to_string(Strategy s);
std::string_view to_string(Experiment e);
std::string_view to_string(DecoderKind d);

bool is_group_strategy(Strategy s);

struct DayRecord {
  std::size_t day = 0;
  std::size_t infected = 0;         ///< Infected individuals at test time, isolated ones included
  std::size_t active_infected = 0;  ///< Infected and not isolated
  std::size_t tests = 0;
  std::size_t false_negatives = 0;
  std::size_t false_positives = 0;
  std::size_t isolated = 0;  ///< isolated so far, after the morning's isolations
  std::size_t pool = 0;
  double entropy_lb = 0.0;
  double p_min = 0.0;
  double p_mean = 0.0;
  double p_max = 0.0;
  bool search_failed = false;

  friend bool operator==(const DayRecord&, const DayRecord&) = default;
};

struct TrajectorySummary {
  std::vector<DayRecord> days;
  friend bool operator==(const TrajectorySummary&, const TrajectorySummary&) = default;
};

struct DayMeans {
  std::size_t day = 0;
  double infected = 0.0;
  double tests = 0.0;
  double false_negatives = 0.0;
  double false_positives = 0.0;
  double isolated = 0.0;
  double entropy_lb = 0.0;
  double p_min = 0.0;
  double p_mean = 0.0;
  double p_max = 0.0;

  friend bool operator==(const DayMeans&, const DayMeans&) = default;
};

struct Aggregate {
  std::size_t trajectories = 0;
  std::vector<DayMeans> days;
  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

/// Random streams of one trajectory. The world stream drives the epidemic
/// only, so strategies that isolate identically see identical epidemics.
struct TrajectoryRngs {
  Rng world;
  Rng design;
};

TrajectoryRngs make_trajectory_rngs(std::uint64_t seed);

/// Seed of trajectory `index` in a Monte Carlo batch rooted at `base_seed`.
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::size_t index);

/// A frozen day: the pool, its priors and its true statuses.
struct StaticInstance {
  PriorVector priors;
  StatusVector truth;
};

struct SearchOutcome {
  std::size_t tests = 0;
  bool failed = false;  ///< even the starting budget did not recover the truth
};

/// Random design of `tests` tests for the policy's strategy.
Design draw_design(const Policy& policy, std::size_t tests, const PriorVector& pv, Rng& rng);

DecodeOutcome decode(DecoderKind kind, const TestMatrix& tm, const Bits& y, std::span<const double> priors,
                     std::size_t cap = kDefaultEnumerationCap);

/// Smallest number of tests for which a fresh design of the policy's
/// strategy, decoded with the policy's decoder, recovers the truth exactly.
/// Walks down from min(start_tests, pool) on a coarse grid until the first
/// failure, then scans upward one test at a time from the failure point.
SearchOutcome min_tests_for_day(const StaticInstance& instance, const Policy& policy, Rng& rng);

/// One day of the testing and intervention loop:
/// yesterday's results are acted on (isolation, prior update), today's pool
/// is tested against its current statuses, then the epidemic advances a day.
DayRecord run_day(PopulationState& world, EstimatorState& est, const Policy& policy, const ModelParams& params,
                  TrajectoryRngs& rngs);

TrajectorySummary run_trajectory(const ModelParams& params, const Policy& policy, std::size_t horizon,
                                 std::uint64_t seed);

/// Per-day means over `trajectories` independent runs. `threads` = 0 uses the
/// hardware concurrency; the result does not depend on it.
Aggregate monte_carlo(const ModelParams& params, const Policy& policy, std::size_t horizon,
                      std::size_t trajectories, std::uint64_t base_seed, std::size_t threads = 0);

/// Mean Infected count per day of the continuous-time comparator.
std::vector<double> mean_gillespie_curve(const ModelParams& params, std::size_t horizon, std::size_t trajectories,
                                         std::uint64_t base_seed, std::size_t threads = 0);

}  // namespace dgt
