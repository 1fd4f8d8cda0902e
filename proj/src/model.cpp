#include "dgt/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace dgt {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void validate(const ModelParams& params) {
  if (params.population == 0) throw InvalidParams("population size N must be positive");
  if (params.community_size == 0) throw InvalidParams("community size C must be positive");
  if (params.population % params.community_size != 0)
    throw InvalidParams("community size C=" + std::to_string(params.community_size) +
                        " does not divide N=" + std::to_string(params.population));
  if (!is_probability(params.p_init)) throw InvalidParams("p_init must lie in [0,1]");
  if (!is_probability(params.q_intra)) throw InvalidParams("q1 must lie in [0,1]");
  if (!is_probability(params.q_inter)) throw InvalidParams("q2 must lie in [0,1]");
  if (!is_probability(params.recovery)) throw InvalidParams("r must lie in [0,1]");
  if (params.q_inter > params.q_intra) throw InvalidParams("q2 must not exceed q1");
  if (params.eta) {
    if (!(*params.eta >= 1.0)) throw InvalidParams("eta must be at least 1");
    if (params.q_inter > 0.0 && params.q_intra / params.q_inter > *params.eta)
      throw InvalidParams("eta must be at least q1/q2");
  }
}

std::size_t PopulationState::count(HealthState s) const {
  return static_cast<std::size_t>(std::count(states.begin(), states.end(), s));
}

std::size_t PopulationState::isolated_count() const {
  return static_cast<std::size_t>(std::count(isolated.begin(), isolated.end(), std::uint8_t{1}));
}

std::vector<std::size_t> PopulationState::active_infected_by_community() const {
  std::vector<std::size_t> counts(size() / community_size, 0);
  for (std::size_t i = 0; i < size(); ++i)
    if (is_infected(i) && !isolated[i]) ++counts[community_of(i)];
  return counts;
}

std::vector<std::size_t> PopulationState::non_isolated() const {
  std::vector<std::size_t> ids;
  ids.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    if (!isolated[i]) ids.push_back(i);
  return ids;
}

namespace {

void recount_new_infections(PopulationState& state) {
  std::fill(state.new_infections.begin(), state.new_infections.end(), 0);
  const int today = static_cast<int>(state.day);
  for (std::size_t i = 0; i < state.size(); ++i)
    if (!state.isolated[i] && state.is_infected(i) && state.infected_on[i] == today)
      ++state.new_infections[state.community_of(i)];
}

}  // namespace

PopulationState init_population(const ModelParams& params, Rng& rng) {
  validate(params);
  const std::size_t n = params.population;
  PopulationState state;
  state.day = 0;
  state.community_size = params.community_size;
  state.states.assign(n, HealthState::susceptible);
  state.isolated.assign(n, 0);
  state.infected_on.assign(n, kNever);
  state.isolated_on.assign(n, kNever);
  state.new_infections.assign(params.communities(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (bernoulli(rng, params.p_init)) {
      state.states[i] = HealthState::infected;
      state.infected_on[i] = 0;
    }
  }
  recount_new_infections(state);
  return state;
}

double infection_probability(std::span<const std::size_t> counts, std::size_t j, const ModelParams& params) {
  if (j >= counts.size()) throw std::out_of_range("community index out of range");
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (counts[j] > params.community_size || total > params.population)
    throw std::invalid_argument("infected counts exceed community or population size");
  const std::size_t same = counts[j];
  const std::size_t other = total - same;
  // log of the probability that every infectious contact fails to transmit
  double log_escape = 0.0;
  if (same > 0) log_escape += static_cast<double>(same) * std::log1p(-params.q_intra);
  if (other > 0) log_escape += static_cast<double>(other) * std::log1p(-params.q_inter);
  return -std::expm1(log_escape);
}

PopulationState step(PopulationState state, const ModelParams& params, Rng& rng) {
  const auto counts = state.active_infected_by_community();
  std::vector<double> p(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) p[j] = infection_probability(counts, j, params);

  const int tomorrow = static_cast<int>(state.day) + 1;
  for (std::size_t i = 0; i < state.size(); ++i) {
    switch (state.states[i]) {
      case HealthState::infected:
        // isolated individuals keep recovering; they only leave the contact process
        if (bernoulli(rng, params.recovery)) state.states[i] = HealthState::recovered;
        break;
      case HealthState::susceptible: {
        const double pi = p[state.community_of(i)];
        if (!state.isolated[i] && pi > 0.0 && bernoulli(rng, pi)) {
          state.states[i] = HealthState::infected;
          state.infected_on[i] = tomorrow;
        }
        break;
      }
      case HealthState::recovered:
        break;
    }
  }
  state.day += 1;
  recount_new_infections(state);
  return state;
}

PopulationState isolate(PopulationState state, std::span<const std::size_t> ids) {
  for (std::size_t id : ids) {
    if (id >= state.size()) throw std::out_of_range("individual id out of range");
    if (!state.isolated[id]) {
      state.isolated[id] = 1;
      state.isolated_on[id] = static_cast<int>(state.day);
    }
  }
  recount_new_infections(state);
  return state;
}

std::vector<std::size_t> gillespie_trajectory(const ModelParams& params, std::size_t horizon, Rng& rng) {
  validate(params);
  const std::size_t m = params.communities();
  std::vector<std::size_t> susceptible(m, 0), infected(m, 0);
  for (std::size_t i = 0; i < params.population; ++i) {
    auto& bucket = bernoulli(rng, params.p_init) ? infected : susceptible;
    ++bucket[params.community_of(i)];
  }
  std::size_t total_infected = std::accumulate(infected.begin(), infected.end(), std::size_t{0});

  std::vector<std::size_t> samples;
  samples.reserve(horizon);
  std::vector<double> infection_rate(m);
  double now = 0.0;
  while (samples.size() < horizon) {
    double total_rate = params.recovery * static_cast<double>(total_infected);
    for (std::size_t j = 0; j < m; ++j) {
      const double pressure = params.q_intra * static_cast<double>(infected[j]) +
                              params.q_inter * static_cast<double>(total_infected - infected[j]);
      infection_rate[j] = static_cast<double>(susceptible[j]) * pressure;
      total_rate += infection_rate[j];
    }
    if (total_rate <= 0.0) {
      samples.resize(horizon, total_infected);
      break;
    }
    now += std::exponential_distribution<double>(total_rate)(rng);
    while (samples.size() < horizon && static_cast<double>(samples.size()) <= now) samples.push_back(total_infected);
    if (samples.size() >= horizon) break;

    double pick = uniform01(rng) * total_rate;
    std::size_t j = 0;
    for (; j < m; ++j) {
      if (pick < infection_rate[j]) break;
      pick -= infection_rate[j];
    }
    if (j < m) {
      --susceptible[j];
      ++infected[j];
      ++total_infected;
    } else {
      // recovery of a uniformly chosen infected individual
      std::size_t which = std::uniform_int_distribution<std::size_t>(0, total_infected - 1)(rng);
      std::size_t k = 0;
      while (which >= infected[k]) which -= infected[k++];
      --infected[k];
      --total_infected;
    }
  }
  return samples;
}

}  // namespace dgt
