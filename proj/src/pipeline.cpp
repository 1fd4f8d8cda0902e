#include "dgt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace dgt {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::no_testing: return "no_testing";
    case Strategy::complete: return "complete";
    case Strategy::cca: return "cca";
    case Strategy::rnd_max: return "rnd_max";
    case Strategy::rnd_mean: return "rnd_mean";
  }
  return "?";
}

std::string_view to_string(Experiment e) {
  return e == Experiment::min_tests_search ? "min_tests_search" : "fixed_budget";
}

std::string_view to_string(DecoderKind d) {
  switch (d) {
    case DecoderKind::dd: return "dd";
    case DecoderKind::comp: return "comp";
    case DecoderKind::map: return "map";
  }
  return "?";
}

bool is_group_strategy(Strategy s) { return s == Strategy::cca || s == Strategy::rnd_max || s == Strategy::rnd_mean; }

TrajectoryRngs make_trajectory_rngs(std::uint64_t seed) { return {make_rng(seed, 0), make_rng(seed, 1)}; }

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::size_t index) {
  return mix_seed(mix_seed(base_seed) + static_cast<std::uint64_t>(index));
}

Design draw_design(const Policy& policy, std::size_t tests, const PriorVector& pv, Rng& rng) {
  const Strategy strategy = policy.strategy;
  switch (strategy) {
    case Strategy::complete: return Design{complete_design(pv.pool)};
    case Strategy::cca: return cca_design(tests, pv, rng, policy.cca_rule);
    case Strategy::rnd_max:
    case Strategy::rnd_mean: {
      const double p_ref = strategy == Strategy::rnd_max ? pv.max() : pv.mean();
      if (!(p_ref > 0.0)) {
        Design empty{TestMatrix(pv.pool, tests)};
        empty.degenerate = true;
        return empty;
      }
      return constant_column_weight_design(tests, pv.pool, p_ref, rng, policy.column_weight_rule);
    }
    case Strategy::no_testing: break;
  }
  return Design{TestMatrix(pv.pool, 0)};
}

DecodeOutcome decode(DecoderKind kind, const TestMatrix& tm, const Bits& y, std::span<const double> priors,
                     std::size_t cap) {
  switch (kind) {
    case DecoderKind::comp: return comp_decode(tm, y);
    case DecoderKind::map: return map_decode(tm, y, priors, cap);
    case DecoderKind::dd: break;
  }
  return dd_decode(tm, y);
}

SearchOutcome min_tests_for_day(const StaticInstance& instance, const Policy& policy, Rng& rng) {
  const PriorVector& pv = instance.priors;
  const std::size_t n = pv.size();
  if (instance.truth.size() != n) throw std::invalid_argument("truth length differs from pool size");
  if (policy.strategy == Strategy::complete) return {n, false};
  if (policy.strategy == Strategy::no_testing) return {0, false};
  if (n == 0) return {0, false};

  const bool any_infected = std::any_of(instance.truth.begin(), instance.truth.end(), [](auto u) { return u != 0; });
  // DD clears everyone on all-negative results, so one pooled test already works
  if (!any_infected && policy.decoder == DecoderKind::dd) return {1, false};

  auto works = [&](std::size_t tests) {
    const Design design = draw_design(policy, tests, pv, rng);
    const Bits y = apply_tests(design.matrix, instance.truth);
    return decode(policy.decoder, design.matrix, y, pv.p, policy.enumeration_cap).estimate == instance.truth;
  };

  const std::size_t start = std::min(policy.search.start_tests, n);
  const std::size_t step = std::max<std::size_t>(1, n / std::max<std::size_t>(1, policy.search.coarse_divisor));
  if (start == 0 || !works(start)) return {start, true};

  std::size_t last_ok = start;
  while (last_ok > 1) {
    const std::size_t next = last_ok > step ? last_ok - step : 1;
    if (!works(next)) {
      for (std::size_t t = next + 1; t < last_ok; ++t)
        if (works(t)) return {t, false};
      return {last_ok, false};
    }
    last_ok = next;
  }
  return {1, false};
}

DayRecord run_day(PopulationState& world, EstimatorState& est, const Policy& policy, const ModelParams& params,
                  TrajectoryRngs& rngs) {
  // yesterday's results: isolate the decoded positives
  world = isolate(std::move(world), est.to_isolate);

  const auto pool = world.non_isolated();
  PriorVector priors = world.day == 0 ? uniform_priors(pool, params.p_init)
                                      : compute_priors(est.believed_new_infections, pool, params);
  StatusVector truth(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) truth[k] = world.is_infected(pool[k]);

  DayRecord record;
  record.day = world.day;
  record.infected = world.count(HealthState::infected);
  record.active_infected = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), std::uint8_t{1}));
  record.isolated = world.isolated_count();
  record.pool = pool.size();
  record.entropy_lb = entropy_lower_bound(priors);
  record.p_min = priors.min();
  record.p_mean = priors.mean();
  record.p_max = priors.max();

  StatusVector decoded;
  std::span<const std::size_t> decoded_pool = pool;
  if (policy.strategy == Strategy::no_testing) {
    decoded_pool = {};
  } else if (policy.experiment == Experiment::min_tests_search && is_group_strategy(policy.strategy)) {
    const SearchOutcome found = min_tests_for_day({priors, truth}, policy, rngs.design);
    record.tests = found.tests;
    record.search_failed = found.failed;
    decoded = truth;
  } else {
    const std::size_t tests = policy.strategy == Strategy::complete
                                  ? pool.size()
                                  : heuristic_budget(pool.size(), priors.mean(), policy.bounds);
    const Design design = draw_design(policy, tests, priors, rngs.design);
    const Bits y = apply_tests(design.matrix, truth);
    decoded = decode(policy.decoder, design.matrix, y, priors.p, policy.enumeration_cap).estimate;
    record.tests = design.matrix.tests();
    for (std::size_t k = 0; k < pool.size(); ++k) {
      record.false_negatives += truth[k] && !decoded[k];
      record.false_positives += !truth[k] && decoded[k];
    }
  }

  est = update_from_decode(std::move(est), decoded, decoded_pool, params);
  est.priors = std::move(priors);
  world = step(std::move(world), params, rngs.world);
  return record;
}

TrajectorySummary run_trajectory(const ModelParams& params, const Policy& policy, std::size_t horizon,
                                 std::uint64_t seed) {
  if (horizon == 0) throw std::invalid_argument("horizon must be at least one day");
  TrajectoryRngs rngs = make_trajectory_rngs(seed);
  PopulationState world = init_population(params, rngs.world);
  EstimatorState est = EstimatorState::fresh(params);
  TrajectorySummary summary;
  summary.days.reserve(horizon);
  for (std::size_t d = 0; d < horizon; ++d) summary.days.push_back(run_day(world, est, policy, params, rngs));
  return summary;
}

namespace {

template <typename Job>
void run_indexed(std::size_t count, std::size_t threads, Job&& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (std::size_t w = 0; w < threads; ++w)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
}

}  // namespace

Aggregate monte_carlo(const ModelParams& params, const Policy& policy, std::size_t horizon,
                      std::size_t trajectories, std::uint64_t base_seed, std::size_t threads) {
  if (trajectories == 0) throw std::invalid_argument("need at least one trajectory");
  validate(params);
  std::vector<TrajectorySummary> runs(trajectories);
  run_indexed(trajectories, threads, [&](std::size_t i) {
    runs[i] = run_trajectory(params, policy, horizon, trajectory_seed(base_seed, i));
  });

  // summed in index order so the result is independent of scheduling
  Aggregate agg;
  agg.trajectories = trajectories;
  agg.days.resize(horizon);
  for (std::size_t d = 0; d < horizon; ++d) agg.days[d].day = d;
  for (const auto& run : runs) {
    for (std::size_t d = 0; d < horizon; ++d) {
      const DayRecord& r = run.days[d];
      DayMeans& m = agg.days[d];
      m.infected += static_cast<double>(r.infected);
      m.tests += static_cast<double>(r.tests);
      m.false_negatives += static_cast<double>(r.false_negatives);
      m.false_positives += static_cast<double>(r.false_positives);
      m.isolated += static_cast<double>(r.isolated);
      m.entropy_lb += r.entropy_lb;
      m.p_min += r.p_min;
      m.p_mean += r.p_mean;
      m.p_max += r.p_max;
    }
  }
  const double scale = 1.0 / static_cast<double>(trajectories);
  for (DayMeans& m : agg.days) {
    m.infected *= scale;
    m.tests *= scale;
    m.false_negatives *= scale;
    m.false_positives *= scale;
    m.isolated *= scale;
    m.entropy_lb *= scale;
    m.p_min *= scale;
    m.p_mean *= scale;
    m.p_max *= scale;
  }
  return agg;
}

std::vector<double> mean_gillespie_curve(const ModelParams& params, std::size_t horizon, std::size_t trajectories,
                                         std::uint64_t base_seed, std::size_t threads) {
  if (trajectories == 0) throw std::invalid_argument("need at least one trajectory");
  std::vector<std::vector<std::size_t>> runs(trajectories);
  run_indexed(trajectories, threads, [&](std::size_t i) {
    Rng rng = make_rng(trajectory_seed(base_seed, i), 2);
    runs[i] = gillespie_trajectory(params, horizon, rng);
  });
  std::vector<double> mean(horizon, 0.0);
  for (const auto& run : runs)
    for (std::size_t d = 0; d < horizon; ++d) mean[d] += static_cast<double>(run[d]);
  for (double& m : mean) m /= static_cast<double>(trajectories);
  return mean;
}

}  // namespace dgt
