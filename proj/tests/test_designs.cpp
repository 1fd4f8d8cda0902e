#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "dgt/bounds.hpp"
#include "dgt/decoders.hpp"
#include "dgt/designs.hpp"

using namespace dgt;

namespace {

std::vector<std::size_t> iota_pool(std::size_t n) {
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

TestMatrix from_rows(std::size_t n, const std::vector<std::vector<std::size_t>>& rows) {
  TestMatrix tm(iota_pool(n), rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t m : rows[t]) tm.add(t, m);
  return tm;
}

}  // namespace

TEST_CASE("complete design is the identity") {
  const auto tm = complete_design(iota_pool(3));
  CHECK(tm.tests() == 3);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t m = 0; m < 3; ++m) CHECK(tm.contains(t, m) == (t == m));
  CHECK(complete_design({}).tests() == 0);
  CHECK(complete_design(iota_pool(1000)).tests() == 1000);
}

TEST_CASE("apply_tests ORs member statuses") {
  // items 1,2,3 of the examples are positions 0,1,2
  const auto tm = from_rows(3, {{0, 1}, {1, 2}});
  const Bits y = apply_tests(tm, StatusVector{0, 0, 1});
  CHECK_FALSE(y.test(0));
  CHECK(y.test(1));
  CHECK_FALSE(apply_tests(tm, StatusVector{0, 0, 0}).any());
  CHECK(apply_tests(tm, StatusVector{1, 1, 1}).count() == 2);
  CHECK_THROWS(apply_tests(tm, StatusVector{0, 1}));
}

TEST_CASE("apply_tests is monotone in the truth") {
  Rng rng = make_rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto design = constant_column_weight_design(20, iota_pool(30), 0.05, rng);
    StatusVector u(30, 0);
    for (auto& x : u) x = bernoulli(rng, 0.1);
    const Bits before = apply_tests(design.matrix, u);
    u[rng() % 30] = 1;
    const Bits after = apply_tests(design.matrix, u);
    CHECK(dgt::bitops::subset_of(before.words(), after.words()));
  }
}

TEST_CASE("constant column weight formula") {
  // T / (n p ln2) = 10 / 1.386 = 7.2
  CHECK(constant_column_weight(10, 100, 0.02, ColumnWeightRule::ln2_divides) == 7);
  // T ln2 / (n p) = 6.93 / 2 = 3.47
  CHECK(constant_column_weight(10, 100, 0.02) == 3);
  bool clamped = false;
  CHECK(constant_column_weight(1000, 1000, 1.0, ColumnWeightRule::ln2_times, &clamped) == 1);
  CHECK(clamped);
  CHECK(constant_column_weight(1000, 1000, 1.0, ColumnWeightRule::ln2_divides, &clamped) == 1);
  CHECK_FALSE(clamped);
  CHECK(constant_column_weight(10, 2, 0.001) == 10);
  CHECK_THROWS(constant_column_weight(10, 100, 0.0));
}

TEST_CASE("constant column weight design: exact column weights, no empty tests") {
  Rng rng = make_rng(2);
  for (ColumnWeightRule rule : {ColumnWeightRule::ln2_times, ColumnWeightRule::ln2_divides}) {
    for (std::size_t tests : {1u, 7u, 64u, 65u, 200u}) {
      const auto design = constant_column_weight_design(tests, iota_pool(150), 0.03, rng, rule);
      const std::size_t L = design.column_weight;
      CHECK(L == constant_column_weight(tests, 150, 0.03, rule));
      for (std::size_t m = 0; m < 150; ++m) CHECK(design.matrix.column_weight(m) == L);
      const auto rows = design.matrix.row_weights();
      CHECK(std::accumulate(rows.begin(), rows.end(), std::size_t{0}) == 150 * L);
      CHECK(std::count(rows.begin(), rows.end(), 0u) == 0);
    }
  }
}

TEST_CASE("constant column weight rows concentrate around n L / T") {
  Rng rng = make_rng(12);
  const auto design = constant_column_weight_design(100, iota_pool(1000), 0.02, rng);
  const double expected = 1000.0 * static_cast<double>(design.column_weight) / 100.0;
  for (std::size_t w : design.matrix.row_weights()) CHECK(std::abs(static_cast<double>(w) - expected) < 6 * std::sqrt(expected));
}

TEST_CASE("designs are reproducible from the seed") {
  const auto pv = uniform_priors(iota_pool(200), 0.03);
  Rng a = make_rng(77), b = make_rng(77);
  CHECK(cca_design(90, pv, a).matrix == cca_design(90, pv, b).matrix);
  CHECK(constant_column_weight_design(90, pv.pool, 0.03, a).matrix ==
        constant_column_weight_design(90, pv.pool, 0.03, b).matrix);
}

TEST_CASE("cca inclusion probabilities") {
  const auto same = uniform_priors(iota_pool(100), 0.05);  // kbar = 5
  for (double nu : cca_inclusion_probabilities(same, CcaRule::weighted)) CHECK(nu == doctest::Approx(0.2));
  const auto dense = uniform_priors(iota_pool(10), 0.1);  // kbar = 1, capped at 1/2
  for (double nu : cca_inclusion_probabilities(dense, CcaRule::weighted)) CHECK(nu == 0.5);

  PriorVector mixed{{0, 1, 2, 3}, {0.01, 0.02, 0.02, 0.04}};  // kbar = 0.09
  const auto nu = cca_inclusion_probabilities(mixed, CcaRule::weighted);
  CHECK(nu[0] >= nu[1]);
  CHECK(nu[1] == nu[2]);
  CHECK(nu[2] >= nu[3]);
  for (double x : nu) CHECK(x <= 0.5);
  PriorVector spread{{0, 1}, {0.001, 0.1}};
  const auto w = cca_inclusion_probabilities(spread, CcaRule::weighted);
  const auto u = cca_inclusion_probabilities(spread, CcaRule::uniform);
  CHECK(w[1] == u[1]);
  CHECK(w[0] == doctest::Approx(std::min(0.5, u[0] * std::log(1000.0) / std::log(10.0))));
}

TEST_CASE("cca: identical priors give the expected inclusion rate") {
  const auto pv = uniform_priors(iota_pool(200), 0.025);  // kbar = 5, rate 0.2
  Rng rng = make_rng(8);
  std::size_t ones = 0;
  const std::size_t reps = 200, tests = 50;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto d = cca_design(tests, pv, rng);
    for (std::size_t m = 0; m < 200; ++m) ones += d.matrix.column_weight(m);
  }
  const double cells = static_cast<double>(reps * tests * 200);
  CHECK(std::abs(static_cast<double>(ones) / cells - 0.2) < 4 * std::sqrt(0.2 * 0.8 / cells));
}

TEST_CASE("cca: less likely items sit in more tests on average") {
  PriorVector pv;
  pv.pool = iota_pool(40);
  pv.p.assign(40, 0.05);
  pv.p[0] = 0.01;  // a
  pv.p[1] = 0.04;  // b
  Rng rng = make_rng(10);
  double a = 0, b = 0;
  for (int r = 0; r < 10000; ++r) {
    const auto d = cca_design(30, pv, rng);
    a += static_cast<double>(d.matrix.column_weight(0));
    b += static_cast<double>(d.matrix.column_weight(1));
  }
  CHECK(a >= b);
}

TEST_CASE("cca: zero expected defectives is degenerate") {
  const auto pv = uniform_priors(iota_pool(10), 0.0);
  Rng rng = make_rng(1);
  const auto d = cca_design(5, pv, rng);
  CHECK(d.degenerate);
  CHECK(d.matrix.row_weights() == std::vector<std::size_t>(5, 0));
}

TEST_CASE("cca: no empty tests") {
  const auto pv = uniform_priors(iota_pool(5), 0.02);  // rate 1/2
  Rng rng = make_rng(21);
  for (int r = 0; r < 100; ++r) {
    const auto rows = cca_design(40, pv, rng).matrix.row_weights();
    CHECK(std::count(rows.begin(), rows.end(), 0u) == 0);
  }
}

TEST_CASE("cca at the coupon-collector budget: DD failure rate within 2 n^-delta") {
  const std::size_t n = 100;
  PriorVector pv;
  pv.pool = iota_pool(n);
  for (std::size_t i = 0; i < n; ++i) pv.p.push_back(0.01 + 0.01 * static_cast<double>(i) / (n - 1));
  const std::size_t tests = cca_budget(static_cast<double>(n), pv.expected_defectives(), 1.0);
  Rng rng = make_rng(31);
  const int trials = 10000;
  int failures = 0;
  for (int k = 0; k < trials; ++k) {
    StatusVector truth(n);
    for (std::size_t i = 0; i < n; ++i) truth[i] = bernoulli(rng, pv.p[i]);
    const auto d = cca_design(tests, pv, rng);
    failures += dd_decode(d.matrix, apply_tests(d.matrix, truth)).estimate != truth;
  }
  CHECK(static_cast<double>(failures) / trials <= 0.02);
}

TEST_CASE("test matrix text format round-trips") {
  TestMatrix tm({5, 9, 12}, 3);
  tm.add(0, 0);
  tm.add(0, 2);
  tm.add(2, 1);
  std::stringstream ss;
  write_test_matrix(ss, tm);
  CHECK(ss.str() == "tests 3 pool 3\n5 9 12\n5 12\n\n9\n");
  CHECK(read_test_matrix(ss) == tm);

  std::stringstream bad("tests 1 pool 1\n5\n7\n");
  CHECK_THROWS(read_test_matrix(bad));
  std::stringstream short_file("tests 2 pool 1\n5\n5\n");
  CHECK_THROWS(read_test_matrix(short_file));
}
