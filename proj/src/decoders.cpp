#include "dgt/decoders.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace dgt {

namespace {

void require_results(const TestMatrix& tm, const Bits& y) {
  if (y.size() != tm.tests()) throw std::invalid_argument("result vector length differs from number of tests");
}

void require_enumerable(std::size_t n, std::size_t cap) {
  if (n > cap || n >= 63)
    throw EnumerationLimit("exhaustive enumeration over " + std::to_string(n) + " items exceeds the cap of " +
                           std::to_string(cap));
}

// Pool positions that appear in at least one negative test.
std::vector<std::uint8_t> cleared_members(const TestMatrix& tm, const Bits& y) {
  const Bits negative = ~y;
  std::vector<std::uint8_t> cleared(tm.pool_size(), 0);
  for (std::size_t m = 0; m < tm.pool_size(); ++m) cleared[m] = bitops::intersects(tm.column(m), negative.words());
  return cleared;
}

// Remaining members that are the only remaining member of some test.
std::vector<std::uint8_t> sole_members(const TestMatrix& tm, std::span<const std::uint8_t> cleared) {
  const std::size_t words = tm.words_per_column();
  std::vector<Word> once(words, 0), twice(words, 0);
  for (std::size_t m = 0; m < tm.pool_size(); ++m) {
    if (cleared[m]) continue;
    const auto col = tm.column(m);
    for (std::size_t w = 0; w < words; ++w) {
      twice[w] |= once[w] & col[w];
      once[w] |= col[w];
    }
  }
  std::vector<std::uint8_t> sole(tm.pool_size(), 0);
  for (std::size_t m = 0; m < tm.pool_size(); ++m)
    if (!cleared[m]) sole[m] = !bitops::subset_of(tm.column(m), twice);
  return sole;
}

// Status vector for lexicographic key `key`: position 0 is the most significant bit.
void unpack_key(std::uint64_t key, std::size_t n, StatusVector& u) {
  for (std::size_t i = 0; i < n; ++i) u[i] = (key >> (n - 1 - i)) & 1u;
}

}  // namespace

double status_probability(std::span<const std::uint8_t> u, std::span<const double> priors) {
  double prob = 1.0;
  for (std::size_t i = 0; i < u.size(); ++i) prob *= u[i] ? priors[i] : 1.0 - priors[i];
  return prob;
}

DecodeOutcome comp_decode(const TestMatrix& tm, const Bits& y) {
  require_results(tm, y);
  DecodeOutcome out;
  out.definite = cleared_members(tm, y);
  out.estimate.resize(tm.pool_size());
  for (std::size_t m = 0; m < tm.pool_size(); ++m) out.estimate[m] = !out.definite[m];
  return out;
}

DecodeOutcome dd_decode(const TestMatrix& tm, const Bits& y) {
  require_results(tm, y);
  const auto cleared = cleared_members(tm, y);
  DecodeOutcome out;
  out.estimate = sole_members(tm, cleared);
  out.definite.resize(tm.pool_size());
  for (std::size_t m = 0; m < tm.pool_size(); ++m) out.definite[m] = cleared[m] || out.estimate[m];
  return out;
}

DecodeOutcome map_decode(const TestMatrix& tm, const Bits& y, std::span<const double> priors, std::size_t cap) {
  require_results(tm, y);
  const std::size_t n = tm.pool_size();
  if (priors.size() != n) throw std::invalid_argument("prior vector length differs from pool size");
  require_enumerable(n, cap);

  std::vector<double> log_in(n), log_out(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_in[i] = std::log(priors[i]);
    log_out[i] = std::log1p(-priors[i]);
  }

  StatusVector u(n), best;
  double best_log = -std::numeric_limits<double>::infinity();
  bool found = false;
  Bits outcome(tm.tests());
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t key = 0; key < states; ++key) {
    unpack_key(key, n, u);
    std::fill(outcome.words().begin(), outcome.words().end(), 0);
    double log_prob = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i]) {
        bitops::or_into(outcome.words(), tm.column(i));
        log_prob += log_in[i];
      } else {
        log_prob += log_out[i];
      }
    }
    if (outcome != y) continue;
    // keys ascend lexicographically, so only a strictly better vector replaces the incumbent
    if (!found || log_prob > best_log + kLogTieTolerance) {
      best = u;
      best_log = log_prob;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("no status vector explains the test results");

  DecodeOutcome out;
  out.estimate = std::move(best);
  const auto cleared = cleared_members(tm, y);
  const auto sole = sole_members(tm, cleared);
  out.definite.resize(n);
  for (std::size_t m = 0; m < n; ++m) out.definite[m] = cleared[m] || sole[m];
  return out;
}

double exact_error_probability(const TestMatrix& tm, std::span<const double> priors, const Decoder& decoder,
                               std::size_t cap) {
  const std::size_t n = tm.pool_size();
  if (priors.size() != n) throw std::invalid_argument("prior vector length differs from pool size");
  require_enumerable(n, cap);

  std::map<Bits, StatusVector> decoded;
  StatusVector u(n);
  double error = 0.0;
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t key = 0; key < states; ++key) {
    unpack_key(key, n, u);
    const Bits y = apply_tests(tm, u);
    auto it = decoded.find(y);
    if (it == decoded.end()) it = decoded.emplace(y, decoder(tm, y)).first;
    if (it->second != u) error += status_probability(u, priors);
  }
  return error;
}

double optimal_error_probability(const TestMatrix& tm, std::span<const double> priors, std::size_t cap) {
  const std::size_t n = tm.pool_size();
  if (priors.size() != n) throw std::invalid_argument("prior vector length differs from pool size");
  require_enumerable(n, cap);

  struct Mass {
    double total = 0.0;
    double best = 0.0;
  };
  std::map<Bits, Mass> by_outcome;
  StatusVector u(n);
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t key = 0; key < states; ++key) {
    unpack_key(key, n, u);
    const double prob = status_probability(u, priors);
    Mass& mass = by_outcome[apply_tests(tm, u)];
    mass.total += prob;
    mass.best = std::max(mass.best, prob);
  }
  double error = 0.0;
  for (const auto& [y, mass] : by_outcome) error += mass.total - mass.best;
  return error;
}

}  // namespace dgt
