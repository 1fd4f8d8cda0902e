#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dgt/model.hpp"

namespace dgt {

/// Per-pool-member infection probabilities of one static testing instance.
struct PriorVector {
  std::vector<std::size_t> pool;  ///< individual ids, one per entry of p
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
  bool empty() const { return p.empty(); }
  double min() const;
  double max() const;
  double mean() const;
  /// Expected number of defectives, the sum of all priors.
  double expected_defectives() const;
};

/// Priors for a pool in which every member has the same probability.
PriorVector uniform_priors(std::span<const std::size_t> pool, double p);

/// Priors implied by per-community counts of infectious individuals.
PriorVector compute_priors(std::span<const std::size_t> counts, std::span<const std::size_t> pool,
                           const ModelParams& params);

enum class BelievedStatus : std::uint8_t { unknown, negative, positive };

/// What the tester believes about the population.
struct EstimatorState {
  std::vector<BelievedStatus> believed_status;     ///< per individual
  std::vector<std::size_t> believed_new_infections;  ///< per community
  std::vector<std::size_t> to_isolate;             ///< decoded positives awaiting isolation
  PriorVector priors;                              ///< current static instance

  static EstimatorState fresh(const ModelParams& params);
};

/// Folds one decode of `pool` into the estimator. `decoded[k]` is the status of pool[k].
EstimatorState update_from_decode(EstimatorState est, std::span<const std::uint8_t> decoded,
                                  std::span<const std::size_t> pool, const ModelParams& params);

struct BoundednessReport {
  std::optional<double> ratio;  ///< p_max / p_min, empty when p_min == 0 or no priors
  bool all_at_most_half = true;
  std::optional<bool> within_eta;  ///< empty when either the ratio or eta is undefined
};

/// Ratio diagnostics. eta defaults to q1/q2 when the params carry none.
BoundednessReport boundedness_report(const PriorVector& pv, const ModelParams& params);

}  // namespace dgt
