#include "dgt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dgt {

namespace {

double log_in(double x, LogBase base) { return base == LogBase::natural ? std::log(x) : std::log2(x); }

}  // namespace

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy_lower_bound(std::span<const double> priors) {
  double sum = 0.0;
  for (double p : priors) sum += binary_entropy(p);
  return sum;
}

double min_prior_lower_bound(double n, double p_min) {
  if (n <= 0.0) return 0.0;
  return std::min(n, n * p_min * std::log(n));
}

std::size_t cca_budget(double n, double kbar, double delta, LogBase base) {
  if (!(kbar > 0.0)) throw std::invalid_argument("expected number of defectives must be positive");
  if (delta < 0.0) throw std::invalid_argument("delta must be non-negative");
  const double raw = 4.0 * std::numbers::e * (1.0 + delta) * kbar * log_in(n, base);
  return raw <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(raw));
}

std::size_t heuristic_budget(std::size_t n, double p_mean, const BoundParams& params) {
  if (n <= 1) return n;
  const double raw = params.heuristic_multiplier * static_cast<double>(n) * p_mean *
                     log_in(static_cast<double>(n), params.log_base);
  if (raw <= 0.0) return 0;
  if (raw >= static_cast<double>(n)) return n;
  return std::min(n, static_cast<std::size_t>(std::ceil(raw)));
}

}  // namespace dgt
