#include "dgt/priors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dgt {

double PriorVector::min() const { return p.empty() ? 0.0 : *std::min_element(p.begin(), p.end()); }

double PriorVector::max() const { return p.empty() ? 0.0 : *std::max_element(p.begin(), p.end()); }

double PriorVector::expected_defectives() const { return std::accumulate(p.begin(), p.end(), 0.0); }

double PriorVector::mean() const {
  if (p.empty()) return 0.0;
  // summation rounding must not push the mean outside [min, max]
  return std::clamp(expected_defectives() / static_cast<double>(p.size()), min(), max());
}

PriorVector uniform_priors(std::span<const std::size_t> pool, double p) {
  return PriorVector{{pool.begin(), pool.end()}, std::vector<double>(pool.size(), p)};
}

PriorVector compute_priors(std::span<const std::size_t> counts, std::span<const std::size_t> pool,
                           const ModelParams& params) {
  std::vector<double> by_community(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) by_community[j] = infection_probability(counts, j, params);
  PriorVector pv;
  pv.pool.assign(pool.begin(), pool.end());
  pv.p.reserve(pool.size());
  for (std::size_t id : pool) pv.p.push_back(by_community.at(params.community_of(id)));
  return pv;
}

EstimatorState EstimatorState::fresh(const ModelParams& params) {
  EstimatorState est;
  est.believed_status.assign(params.population, BelievedStatus::unknown);
  est.believed_new_infections.assign(params.communities(), 0);
  return est;
}

EstimatorState update_from_decode(EstimatorState est, std::span<const std::uint8_t> decoded,
                                  std::span<const std::size_t> pool, const ModelParams& params) {
  if (decoded.size() != pool.size()) throw std::invalid_argument("decoded statuses and pool differ in length");
  std::fill(est.believed_new_infections.begin(), est.believed_new_infections.end(), 0);
  est.to_isolate.clear();
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const std::size_t id = pool[k];
    if (decoded[k]) {
      est.believed_status.at(id) = BelievedStatus::positive;
      ++est.believed_new_infections.at(params.community_of(id));
      est.to_isolate.push_back(id);
    } else {
      est.believed_status.at(id) = BelievedStatus::negative;
    }
  }
  return est;
}

BoundednessReport boundedness_report(const PriorVector& pv, const ModelParams& params) {
  BoundednessReport report;
  report.all_at_most_half = std::all_of(pv.p.begin(), pv.p.end(), [](double x) { return x <= 0.5; });
  if (pv.empty() || pv.min() <= 0.0) return report;
  report.ratio = pv.max() / pv.min();
  std::optional<double> eta = params.eta;
  if (!eta && params.q_inter > 0.0) eta = params.q_intra / params.q_inter;
  // relative slack absorbs rounding in the closed-form probabilities
  if (eta) report.within_eta = *report.ratio <= *eta * (1.0 + 1e-12);
  return report;
}

}  // namespace dgt
