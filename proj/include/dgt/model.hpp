#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dgt/random.hpp"

namespace dgt {

/// Parameters of the discrete-time SIR stochastic block model.
struct ModelParams {
  std::size_t population = 1000;    ///< N
  std::size_t community_size = 50;  ///< C, must divide N
  double p_init = 0.02;             ///< day-0 infection probability
  double q_intra = 0.012;           ///< per-contact daily transmission inside a community
  double q_inter = 0.0004;          ///< per-contact daily transmission across communities
  double recovery = 0.1;            ///< daily recovery probability
  std::optional<double> eta;        ///< optional prior-ratio bound

  std::size_t communities() const { return population / community_size; }
  std::size_t community_of(std::size_t individual) const { return individual / community_size; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws InvalidParams describing the first violated constraint.
void validate(const ModelParams& params);

enum class HealthState : std::uint8_t { susceptible, infected, recovered };

inline constexpr int kNever = -1;

/// Ground-truth state of the population at the start of `day`.
struct PopulationState {
  std::size_t day = 0;
  std::size_t community_size = 1;
  std::vector<HealthState> states;
  std::vector<std::uint8_t> isolated;
  /// First day on which the individual was Infected at the start of the day.
  std::vector<int> infected_on;
  /// Day the individual was isolated, kNever otherwise.
  std::vector<int> isolated_on;
  /// Per community: individuals infected since the previous day that are not isolated.
  std::vector<std::size_t> new_infections;

  std::size_t size() const { return states.size(); }
  std::size_t community_of(std::size_t i) const { return i / community_size; }
  bool is_infected(std::size_t i) const { return states[i] == HealthState::infected; }

  std::size_t count(HealthState s) const;
  std::size_t isolated_count() const;
  /// Non-isolated Infected individuals per community.
  std::vector<std::size_t> active_infected_by_community() const;
  /// Individuals not isolated, in id order.
  std::vector<std::size_t> non_isolated() const;
};

PopulationState init_population(const ModelParams& params, Rng& rng);

/// Probability that a susceptible member of community `j` is infected during
/// one day, given per-community counts of infectious individuals.
double infection_probability(std::span<const std::size_t> counts, std::size_t j, const ModelParams& params);

/// Advances one day: recoveries of individuals infected before today, then
/// new infections driven by non-isolated infected counts at the start of the day.
PopulationState step(PopulationState state, const ModelParams& params, Rng& rng);

/// Permanently removes `ids` from the dynamics. Idempotent.
PopulationState isolate(PopulationState state, std::span<const std::size_t> ids);

/// Continuous-time SIR epidemic on the weighted complete block graph
/// (rates q_intra / q_inter per pair per day, recovery rate per day).
/// Returns the number of Infected individuals at integer days 0..horizon-1.
std::vector<std::size_t> gillespie_trajectory(const ModelParams& params, std::size_t horizon, Rng& rng);

}  // namespace dgt
