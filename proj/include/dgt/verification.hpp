#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dgt/model.hpp"

namespace dgt {

/// Outcome of one property checked over many cases.
struct PropertyReport {
  PropertyReport(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::string first_violation;  ///< description of the first failing case

  bool passed() const { return checks > 0 && violations == 0; }
  void fail(std::string what);
};

struct StaticSuiteOptions {
  std::size_t instances = 200;
  std::size_t max_items = 6;
  std::size_t max_tests = 6;
  std::size_t random_decoders = 100;  ///< lookup-table decoders per instance
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
};

/// Exhaustive checks on random small designs with priors in (0, 1/2]:
///  - map_optimality: MAP error <= COMP, DD and random lookup-table decoders,
///    and equals the direct optimal-error sum;
///  - error_monotonicity: if MAP errs on a defective set it errs on every superset
///    with one more defective;
///  - prior_lowering: lowering one prior never raises the optimal error;
///  - prior_sandwich: optimal error at p_min*1 <= at p <= at p_max*1.
std::vector<PropertyReport> static_oracle_suite(const StaticSuiteOptions& opts = {});

/// (1 - kappa x) / (1 - x)
double shrink_ratio(double x, double kappa);
/// (1 - q)^x
double escape_probability(double x, double q);
/// (1 - (1 - q1)^x) / (1 - (1 - q2)^x)
double infection_ratio(double x, double q1, double q2);

/// Grid checks: shrink_ratio increasing in x on (0, 1) for kappa in (0, 1);
/// escape_probability decreasing in x >= 0; infection_ratio non-increasing in
/// x >= 1 when q1 >= q2. Parameters and x share the grid step.
std::vector<PropertyReport> monotonicity_grid_suite(double step = 1e-2, double tolerance = 1e-12);

/// Parameters under which daily priors stay at most 1/2 with
/// p_max / p_min <= q1 / q2: C = 20, N = 1000, p_init = 1/2,
/// q1 = (1 - 1/sqrt 2) / C, q2 = (1 - 1/sqrt 2) / N.
ModelParams bounded_prior_params();

/// Runs complete testing and checks every day's prior vector:
/// priors_at_most_half and ratio_within_eta (eta = q1/q2 unless set).
std::vector<PropertyReport> prior_boundedness_suite(const ModelParams& params, std::size_t trajectories,
                                                    std::size_t horizon, std::uint64_t seed);

}  // namespace dgt
