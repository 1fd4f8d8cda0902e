#include <doctest.h>

#include <numeric>

#include "dgt/pipeline.hpp"

using namespace dgt;

namespace {

ModelParams small_params() {
  ModelParams p;
  p.population = 200;
  p.community_size = 20;
  p.q_intra = 0.03;
  return p;
}

Policy policy_for(Strategy s, Experiment e = Experiment::fixed_budget) {
  Policy p;
  p.strategy = s;
  p.experiment = e;
  return p;
}

StaticInstance day0_instance(std::size_t n, double p, std::uint64_t seed) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  StaticInstance inst{uniform_priors(pool, p), StatusVector(n)};
  Rng rng = make_rng(seed);
  for (auto& u : inst.truth) u = bernoulli(rng, p);
  return inst;
}

}  // namespace

TEST_CASE("no testing uses no tests") {
  const auto run = run_trajectory(small_params(), policy_for(Strategy::no_testing), 20, 3);
  for (const auto& d : run.days) {
    CHECK(d.tests == 0);
    CHECK(d.isolated == 0);
  }
}

TEST_CASE("no testing follows the model-only epidemic") {
  const ModelParams p = small_params();
  const auto run = run_trajectory(p, policy_for(Strategy::no_testing), 15, 8);
  TrajectoryRngs rngs = make_trajectory_rngs(8);
  PopulationState world = init_population(p, rngs.world);
  for (const auto& d : run.days) {
    CHECK(d.infected == world.count(HealthState::infected));
    world = step(std::move(world), p, rngs.world);
  }
}

TEST_CASE("complete testing is exact and isolates exactly one day after infection") {
  const ModelParams p = small_params();
  const Policy pol = policy_for(Strategy::complete);
  TrajectoryRngs rngs = make_trajectory_rngs(17);
  PopulationState world = init_population(p, rngs.world);
  EstimatorState est = EstimatorState::fresh(p);
  for (int d = 0; d < 25; ++d) {
    const DayRecord r = run_day(world, est, pol, p, rngs);
    CHECK(r.tests == r.pool);
    CHECK(r.false_negatives == 0);
    CHECK(r.false_positives == 0);
  }
  for (std::size_t i = 0; i < world.size(); ++i) {
    if (world.isolated_on[i] == kNever) continue;
    // tested on the first day infected, results acted on the next morning
    CHECK(world.isolated_on[i] == world.infected_on[i] + 1);
  }
}

TEST_CASE("complete testing with nobody infected isolates nobody") {
  ModelParams p = small_params();
  p.p_init = 0.0;
  const auto run = run_trajectory(p, policy_for(Strategy::complete), 5, 1);
  for (const auto& d : run.days) {
    CHECK(d.isolated == 0);
    CHECK(d.tests == p.population);
  }
}

TEST_CASE("heuristic runs with DD never report false positives and respect the delay") {
  const ModelParams p = small_params();
  for (Strategy s : {Strategy::cca, Strategy::rnd_max, Strategy::rnd_mean}) {
    const Policy pol = policy_for(s);
    TrajectoryRngs rngs = make_trajectory_rngs(23);
    PopulationState world = init_population(p, rngs.world);
    EstimatorState est = EstimatorState::fresh(p);
    for (int d = 0; d < 30; ++d) {
      const DayRecord r = run_day(world, est, pol, p, rngs);
      CHECK(r.false_positives == 0);
      CHECK(r.tests <= r.pool);
    }
    for (std::size_t i = 0; i < world.size(); ++i)
      if (world.isolated_on[i] != kNever) CHECK(world.isolated_on[i] >= world.infected_on[i] + 1);
  }
}

TEST_CASE("min tests: trivial cases") {
  auto inst = day0_instance(300, 0.02, 1);
  std::fill(inst.truth.begin(), inst.truth.end(), 0);
  Rng rng = make_rng(2);
  const auto none = min_tests_for_day(inst, policy_for(Strategy::rnd_mean, Experiment::min_tests_search), rng);
  CHECK(none.tests == 1);
  CHECK_FALSE(none.failed);

  const auto comp = min_tests_for_day(inst, policy_for(Strategy::complete, Experiment::min_tests_search), rng);
  CHECK(comp.tests == 300);
}

TEST_CASE("min tests: failure at the starting budget is flagged") {
  auto inst = day0_instance(300, 0.05, 4);
  inst.truth[0] = inst.truth[1] = 1;
  Policy pol = policy_for(Strategy::rnd_max, Experiment::min_tests_search);
  pol.search.start_tests = 1;
  Rng rng = make_rng(5);
  const auto out = min_tests_for_day(inst, pol, rng);
  CHECK(out.failed);
  CHECK(out.tests == 1);
}

TEST_CASE("min tests: deterministic, and the reported budget recovers the truth") {
  const auto inst = day0_instance(400, 0.02, 6);
  for (Strategy s : {Strategy::cca, Strategy::rnd_max, Strategy::rnd_mean}) {
    const Policy pol = policy_for(s, Experiment::min_tests_search);
    Rng a = make_rng(9), b = make_rng(9);
    const auto first = min_tests_for_day(inst, pol, a);
    const auto second = min_tests_for_day(inst, pol, b);
    CHECK(first.tests == second.tests);
    CHECK_FALSE(first.failed);
    CHECK(first.tests >= 1);
    CHECK(first.tests <= 400);
  }
}

TEST_CASE("min tests on day-0 instances lie between the entropy bound and the starting budget") {
  double total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = day0_instance(1000, 0.02, seed);
    Rng rng = make_rng(seed, 1);
    total += static_cast<double>(min_tests_for_day(inst, policy_for(Strategy::rnd_mean, Experiment::min_tests_search), rng).tests);
  }
  CHECK(total / 10 > 141.44 * 0.8);
  CHECK(total / 10 < 450);
}

TEST_CASE("trajectories are deterministic") {
  const ModelParams p = small_params();
  const Policy pol = policy_for(Strategy::rnd_mean, Experiment::min_tests_search);
  CHECK(run_trajectory(p, pol, 1, 5).days.size() == 1);
  CHECK(run_trajectory(p, pol, 20, 5) == run_trajectory(p, pol, 20, 5));
  CHECK_THROWS(run_trajectory(p, pol, 0, 5));
}

TEST_CASE("monte carlo: one trajectory, thread independence, day-0 entropy") {
  const ModelParams p = small_params();
  const Policy pol = policy_for(Strategy::cca);
  const auto one = monte_carlo(p, pol, 10, 1, 77, 1);
  const auto run = run_trajectory(p, pol, 10, trajectory_seed(77, 0));
  for (std::size_t d = 0; d < 10; ++d) {
    CHECK(one.days[d].infected == static_cast<double>(run.days[d].infected));
    CHECK(one.days[d].tests == static_cast<double>(run.days[d].tests));
  }
  CHECK(monte_carlo(p, pol, 10, 6, 3, 1) == monte_carlo(p, pol, 10, 6, 3, 4));

  ModelParams big;
  const auto agg = monte_carlo(big, policy_for(Strategy::no_testing), 1, 5, 1, 1);
  CHECK(std::abs(agg.days[0].entropy_lb - 141.440542541821) < 1e-9);
  CHECK_THROWS(monte_carlo(p, pol, 10, 0, 3, 1));
}

TEST_CASE("continuous-time comparator averages runs") {
  const auto curve = mean_gillespie_curve(small_params(), 10, 20, 1, 1);
  CHECK(curve.size() == 10);
  CHECK(curve == mean_gillespie_curve(small_params(), 10, 20, 1, 3));
}
