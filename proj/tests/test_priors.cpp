#include <doctest.h>

#include <numeric>

#include "dgt/bounds.hpp"
#include "dgt/priors.hpp"

using namespace dgt;

namespace {

std::vector<std::size_t> iota_pool(std::size_t n) {
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

TEST_CASE("zero counts give zero priors") {
  ModelParams p;
  const std::vector<std::size_t> counts(p.communities(), 0);
  const auto pv = compute_priors(counts, iota_pool(p.population), p);
  CHECK(pv.size() == p.population);
  CHECK(pv.max() == 0.0);
  CHECK(pv.expected_defectives() == 0.0);
}

TEST_CASE("members of one community share a prior") {
  ModelParams p;
  std::vector<std::size_t> counts(p.communities(), 0);
  counts[0] = 3;
  counts[4] = 1;
  const auto pool = iota_pool(p.population);
  const auto pv = compute_priors(counts, pool, p);
  for (std::size_t k = 0; k < pool.size(); ++k)
    CHECK(pv.p[k] == pv.p[(k / p.community_size) * p.community_size]);
  CHECK(pv.p[0] > pv.p[200]);
  CHECK(pv.p[0] == infection_probability(counts, 0, p));
}

TEST_CASE("single community gives identical priors") {
  ModelParams p;
  p.population = 40;
  p.community_size = 40;
  const std::vector<std::size_t> counts{5};
  const auto pv = compute_priors(counts, iota_pool(40), p);
  CHECK(pv.min() == pv.max());
}

TEST_CASE("day-0 priors: k-bar 20 and entropy 141.4405") {
  const auto pv = uniform_priors(iota_pool(1000), 0.02);
  CHECK(pv.expected_defectives() == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(entropy_lower_bound(pv) == doctest::Approx(141.440542541821).epsilon(1e-10));
  CHECK(pv.min() <= pv.mean());
  CHECK(pv.mean() <= pv.max());
}

TEST_CASE("empty pool gives an empty prior vector") {
  ModelParams p;
  const std::vector<std::size_t> counts(p.communities(), 1);
  const auto pv = compute_priors(counts, {}, p);
  CHECK(pv.empty());
  CHECK(pv.min() == 0.0);
}

TEST_CASE("update_from_decode counts positives per community") {
  ModelParams p;
  auto est = EstimatorState::fresh(p);
  const std::vector<std::size_t> pool{0, 1, 2, 60, 61};
  const std::vector<std::uint8_t> none(pool.size(), 0);
  est = update_from_decode(std::move(est), none, pool, p);
  CHECK(std::accumulate(est.believed_new_infections.begin(), est.believed_new_infections.end(), std::size_t{0}) == 0);
  CHECK(est.to_isolate.empty());

  const std::vector<std::uint8_t> two{1, 0, 1, 0, 0};
  est = update_from_decode(std::move(est), two, pool, p);
  CHECK(est.believed_new_infections[0] == 2);
  CHECK(std::accumulate(est.believed_new_infections.begin(), est.believed_new_infections.end(), std::size_t{0}) == 2);
  CHECK(est.to_isolate == std::vector<std::size_t>{0, 2});
  CHECK(est.believed_status[0] == BelievedStatus::positive);
  CHECK(est.believed_status[1] == BelievedStatus::negative);
  CHECK(est.believed_status[100] == BelievedStatus::unknown);

  const std::vector<std::uint8_t> wrong_length{1};
  CHECK_THROWS(update_from_decode(est, wrong_length, pool, p));
}

TEST_CASE("boundedness report") {
  ModelParams p;
  auto same = uniform_priors(iota_pool(10), 0.1);
  auto r = boundedness_report(same, p);
  REQUIRE(r.ratio);
  CHECK(*r.ratio == 1.0);
  CHECK(r.all_at_most_half);
  CHECK(r.within_eta.value());

  PriorVector with_zero{{0, 1}, {0.0, 0.2}};
  r = boundedness_report(with_zero, p);
  CHECK_FALSE(r.ratio);
  CHECK_FALSE(r.within_eta);

  PriorVector big{{0, 1}, {0.6, 0.01}};
  r = boundedness_report(big, p);
  CHECK_FALSE(r.all_at_most_half);
  CHECK(*r.ratio == doctest::Approx(60.0));
  CHECK(r.within_eta.value() == false);  // q1/q2 = 30

  ModelParams equal = p;
  equal.q_inter = equal.q_intra;
  std::vector<std::size_t> counts(equal.communities(), 0);
  counts[3] = 2;
  const auto pv = compute_priors(counts, iota_pool(equal.population), equal);
  CHECK(*boundedness_report(pv, equal).ratio == doctest::Approx(1.0).epsilon(1e-14));
}
