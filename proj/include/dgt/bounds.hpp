#pragma once

#include <cstddef>
#include <numbers>
#include <span>

#include "dgt/priors.hpp"

namespace dgt {

enum class LogBase { natural, binary };

struct BoundParams {
  double delta = 2.0;  ///< target error 2 n^-delta for the coupon-collector budget
  /// Multiplier of n * p_mean * log n in the daily heuristic budget; 4e(1+delta) = 12e at delta = 2.
  double heuristic_multiplier = 12.0 * std::numbers::e;
  LogBase log_base = LogBase::natural;  ///< logarithm used inside the test budgets

  friend bool operator==(const BoundParams&, const BoundParams&) = default;
};

/// Binary entropy in bits, with h2(0) = h2(1) = 0.
double binary_entropy(double p);

/// Counting bound: sum of h2(p_i) tests.
double entropy_lower_bound(std::span<const double> priors);
inline double entropy_lower_bound(const PriorVector& pv) { return entropy_lower_bound(pv.p); }

/// min{n, n * p_min * ln n}; the order of tests any vanishing-error design
/// needs when every prior is at most 1/2. Constants are not included.
double min_prior_lower_bound(double n, double p_min);

/// ceil(4e(1+delta) * kbar * log n), the coupon-collector test budget.
std::size_t cca_budget(double n, double kbar, double delta, LogBase base = LogBase::natural);

/// min{ceil(multiplier * n * p_mean * log n), n}; n <= 1 returns n.
std::size_t heuristic_budget(std::size_t n, double p_mean, const BoundParams& params = {});

}  // namespace dgt
