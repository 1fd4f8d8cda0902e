#include "dgt/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dgt/decoders.hpp"
#include "dgt/pipeline.hpp"
#include "dgt/priors.hpp"
#include "dgt/random.hpp"

namespace dgt {

void PropertyReport::fail(std::string what) {
  if (violations++ == 0) first_violation = std::move(what);
}

namespace {

struct Instance {
  TestMatrix tm;
  std::vector<double> p;
};

Instance random_instance(const StaticSuiteOptions& opts, Rng& rng) {
  const std::size_t n = 1 + rng() % opts.max_items;
  const std::size_t tests = rng() % (opts.max_tests + 1);
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  Instance inst{TestMatrix(pool, tests), std::vector<double>(n)};
  for (std::size_t t = 0; t < tests; ++t)
    for (std::size_t i = 0; i < n; ++i)
      if (bernoulli(rng, 0.5)) inst.tm.add(t, i);
  for (double& x : inst.p) x = 0.5 * (1.0 - uniform01(rng));  // (0, 1/2]
  return inst;
}

std::string describe(const Instance& inst) {
  std::ostringstream os;
  os << "n=" << inst.tm.pool_size() << " T=" << inst.tm.tests() << " tests:";
  for (std::size_t t = 0; t < inst.tm.tests(); ++t) {
    os << " {";
    const auto members = inst.tm.members(t);
    for (std::size_t k = 0; k < members.size(); ++k) os << (k ? "," : "") << members[k];
    os << "}";
  }
  os << " p:";
  for (double x : inst.p) os << ' ' << x;
  return os.str();
}

std::size_t result_index(const Bits& y) {
  std::size_t index = 0;
  for (std::size_t t = 0; t < y.size(); ++t) index |= static_cast<std::size_t>(y.test(t)) << t;
  return index;
}

StatusVector unpack(std::uint64_t key, std::size_t n) {
  StatusVector u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (key >> i) & 1u;
  return u;
}

Decoder map_decoder(const std::vector<double>& p) {
  return [&p](const TestMatrix& tm, const Bits& y) { return map_decode(tm, y, p).estimate; };
}

void check_map_optimality(const Instance& inst, const StaticSuiteOptions& opts, Rng& rng, PropertyReport& report) {
  const double map_error = exact_error_probability(inst.tm, inst.p, map_decoder(inst.p));
  auto compare = [&](const char* name, double other) {
    ++report.checks;
    if (map_error > other + opts.tolerance)
      report.fail(std::string("MAP error ") + std::to_string(map_error) + " exceeds " + name + " error " +
                  std::to_string(other) + " on " + describe(inst));
  };

  ++report.checks;
  if (const double direct = optimal_error_probability(inst.tm, inst.p); std::abs(direct - map_error) > opts.tolerance)
    report.fail("MAP error " + std::to_string(map_error) + " differs from the direct optimum " +
                std::to_string(direct) + " on " + describe(inst));
  compare("COMP", exact_error_probability(inst.tm, inst.p, [](const TestMatrix& tm, const Bits& y) {
            return comp_decode(tm, y).estimate;
          }));
  compare("DD", exact_error_probability(inst.tm, inst.p, [](const TestMatrix& tm, const Bits& y) {
            return dd_decode(tm, y).estimate;
          }));

  const std::size_t n = inst.tm.pool_size();
  const std::size_t outcomes = std::size_t{1} << inst.tm.tests();
  for (std::size_t d = 0; d < opts.random_decoders; ++d) {
    // lookup table: test results -> status vector
    std::vector<std::uint64_t> table(outcomes);
    for (auto& entry : table) entry = rng() & ((std::uint64_t{1} << n) - 1);
    compare("lookup-table", exact_error_probability(inst.tm, inst.p, [&](const TestMatrix&, const Bits& y) {
              return unpack(table[result_index(y)], n);
            }));
  }
}

void check_error_monotonicity(const Instance& inst, PropertyReport& report) {
  const std::size_t n = inst.tm.pool_size();
  const std::uint64_t states = std::uint64_t{1} << n;
  std::vector<std::uint8_t> errs(states);
  for (std::uint64_t key = 0; key < states; ++key) {
    const StatusVector u = unpack(key, n);
    errs[key] = map_decode(inst.tm, apply_tests(inst.tm, u), inst.p).estimate != u;
  }
  for (std::uint64_t key = 0; key < states; ++key) {
    if (!errs[key]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if ((key >> j) & 1u) continue;
      ++report.checks;
      if (!errs[key | (std::uint64_t{1} << j)]) {
        std::ostringstream os;
        os << "MAP errs on defective set " << key << " but not after adding item " << j << " on " << describe(inst);
        report.fail(os.str());
      }
    }
  }
}

void check_prior_lowering(const Instance& inst, const StaticSuiteOptions& opts, Rng& rng, PropertyReport& report) {
  const double base = optimal_error_probability(inst.tm, inst.p);
  for (std::size_t j = 0; j < inst.p.size(); ++j) {
    std::vector<double> lowered = inst.p;
    lowered[j] = inst.p[j] * (1.0 - uniform01(rng));  // (0, p_j]
    ++report.checks;
    if (const double after = optimal_error_probability(inst.tm, lowered); after > base + opts.tolerance)
      report.fail("lowering p_" + std::to_string(j) + " to " + std::to_string(lowered[j]) + " raised the error from " +
                  std::to_string(base) + " to " + std::to_string(after) + " on " + describe(inst));
  }
}

void check_prior_sandwich(const Instance& inst, const StaticSuiteOptions& opts, PropertyReport& report) {
  const auto [lo, hi] = std::minmax_element(inst.p.begin(), inst.p.end());
  const double at_min = optimal_error_probability(inst.tm, std::vector<double>(inst.p.size(), *lo));
  const double at_p = optimal_error_probability(inst.tm, inst.p);
  const double at_max = optimal_error_probability(inst.tm, std::vector<double>(inst.p.size(), *hi));
  report.checks += 2;
  if (at_min > at_p + opts.tolerance)
    report.fail("error at p_min " + std::to_string(at_min) + " exceeds error at p " + std::to_string(at_p) + " on " +
                describe(inst));
  if (at_p > at_max + opts.tolerance)
    report.fail("error at p " + std::to_string(at_p) + " exceeds error at p_max " + std::to_string(at_max) + " on " +
                describe(inst));
}

// f must not move against `direction` between consecutive grid points.
template <typename F>
void check_monotone(PropertyReport& report, F f, double from, double to, double step, int direction,
                    double tolerance, const std::string& label) {
  const auto points = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
  double prev = f(from);
  for (std::size_t k = 1; k <= points; ++k) {
    const double x = from + static_cast<double>(k) * step;
    const double cur = f(x);
    ++report.checks;
    const double slack = tolerance * std::max(1.0, std::abs(prev));
    const bool ok = direction > 0 ? cur > prev - slack : cur < prev + slack;
    if (!ok) report.fail(label + " at x=" + std::to_string(x) + ": " + std::to_string(prev) + " -> " + std::to_string(cur));
    prev = cur;
  }
}

}  // namespace

std::vector<PropertyReport> static_oracle_suite(const StaticSuiteOptions& opts) {
  std::vector<PropertyReport> reports{
      {"map_optimality"}, {"error_monotonicity"}, {"prior_lowering"}, {"prior_sandwich"}};
  Rng rng = make_rng(opts.seed, 3);
  for (std::size_t k = 0; k < opts.instances; ++k) {
    const Instance inst = random_instance(opts, rng);
    check_map_optimality(inst, opts, rng, reports[0]);
    check_error_monotonicity(inst, reports[1]);
    check_prior_lowering(inst, opts, rng, reports[2]);
    check_prior_sandwich(inst, opts, reports[3]);
  }
  return reports;
}

double shrink_ratio(double x, double kappa) { return (1.0 - kappa * x) / (1.0 - x); }

double escape_probability(double x, double q) { return std::exp(x * std::log1p(-q)); }

double infection_ratio(double x, double q1, double q2) {
  return std::expm1(x * std::log1p(-q1)) / std::expm1(x * std::log1p(-q2));
}

std::vector<PropertyReport> monotonicity_grid_suite(double step, double tolerance) {
  std::vector<PropertyReport> reports{{"shrink_ratio_increasing"}, {"escape_probability_decreasing"},
                                      {"infection_ratio_non_increasing"}};
  const auto params = static_cast<std::size_t>(std::floor(1.0 / step - 1e-9));
  auto grid = [&](std::size_t k) { return static_cast<double>(k) * step; };

  for (std::size_t a = 1; a < params; ++a) {
    const double kappa = grid(a);
    check_monotone(reports[0], [&](double x) { return shrink_ratio(x, kappa); }, step, 1.0 - step, step, +1, tolerance,
                   "kappa=" + std::to_string(kappa));
    check_monotone(reports[1], [&](double x) { return escape_probability(x, kappa); }, 0.0, 50.0, step, -1,
                   tolerance, "q=" + std::to_string(kappa));
    for (std::size_t b = 1; b <= a; ++b) {
      const double q2 = grid(b);
      check_monotone(reports[2], [&](double x) { return infection_ratio(x, kappa, q2); }, 1.0, 20.0, step, -1,
                     tolerance, "q1=" + std::to_string(kappa) + " q2=" + std::to_string(q2));
    }
  }
  return reports;
}

ModelParams bounded_prior_params() {
  ModelParams p;
  const double c = 1.0 - 1.0 / std::sqrt(2.0);
  p.population = 1000;
  p.community_size = 20;
  p.p_init = 0.5;
  p.q_intra = c / 20.0;
  p.q_inter = c / 1000.0;
  p.recovery = 0.1;
  return p;
}

std::vector<PropertyReport> prior_boundedness_suite(const ModelParams& params, std::size_t trajectories,
                                                    std::size_t horizon, std::uint64_t seed) {
  std::vector<PropertyReport> reports{{"priors_at_most_half"}, {"ratio_within_eta"}};
  Policy policy;
  policy.strategy = Strategy::complete;
  for (std::size_t i = 0; i < trajectories; ++i) {
    TrajectoryRngs rngs = make_trajectory_rngs(trajectory_seed(seed, i));
    PopulationState world = init_population(params, rngs.world);
    EstimatorState est = EstimatorState::fresh(params);
    for (std::size_t d = 0; d < horizon; ++d) {
      run_day(world, est, policy, params, rngs);
      const BoundednessReport b = boundedness_report(est.priors, params);
      const std::string where = "trajectory " + std::to_string(i) + " day " + std::to_string(d);
      ++reports[0].checks;
      if (!b.all_at_most_half) reports[0].fail(where + ": p_max = " + std::to_string(est.priors.max()));
      if (b.within_eta) {
        ++reports[1].checks;
        if (!*b.within_eta) reports[1].fail(where + ": p_max/p_min = " + std::to_string(*b.ratio));
      }
    }
  }
  return reports;
}

}  // namespace dgt
