#include "dgt/designs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dgt {

TestMatrix::TestMatrix(std::vector<std::size_t> pool, std::size_t tests)
    : pool_(std::move(pool)), tests_(tests), words_(words_for(tests)), bits_(pool_.size() * words_, 0) {}

bool TestMatrix::contains(std::size_t test, std::size_t member) const {
  return (column(member)[test / kWordBits] >> (test % kWordBits)) & 1u;
}

void TestMatrix::add(std::size_t test, std::size_t member) {
  column(member)[test / kWordBits] |= Word{1} << (test % kWordBits);
}

void TestMatrix::remove(std::size_t test, std::size_t member) {
  column(member)[test / kWordBits] &= ~(Word{1} << (test % kWordBits));
}

std::vector<std::size_t> TestMatrix::members(std::size_t test) const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < pool_size(); ++m)
    if (contains(test, m)) out.push_back(m);
  return out;
}

std::vector<std::size_t> TestMatrix::row_weights() const {
  std::vector<std::size_t> weights(tests_, 0);
  for (std::size_t m = 0; m < pool_size(); ++m) {
    const auto col = column(m);
    for (std::size_t w = 0; w < words_; ++w) {
      for (Word bits = col[w]; bits; bits &= bits - 1)
        ++weights[w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits))];
    }
  }
  return weights;
}

TestMatrix complete_design(std::span<const std::size_t> pool) {
  TestMatrix tm({pool.begin(), pool.end()}, pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) tm.add(i, i);
  return tm;
}

namespace {

std::size_t uniform_below(IndexSampler& draw, std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("index range exceeds 32 bits");
  return draw(static_cast<std::uint32_t>(n));
}

void fill_random_half(std::span<Word> col, std::size_t tests, Rng& rng) {
  for (Word& w : col) w = rng();
  if (const std::size_t tail = tests % kWordBits; tail != 0) col.back() &= (Word{1} << tail) - 1;
}

bool test_bit(std::span<const Word> col, std::size_t t) { return (col[t / kWordBits] >> (t % kWordBits)) & 1u; }

void flip_bit(std::span<Word> col, std::size_t t) { col[t / kWordBits] ^= Word{1} << (t % kWordBits); }

// Floyd's sampling of `k` distinct positions in [0, n); flips each chosen bit,
// so a zero column gains k ones and a full column loses k.
void flip_random_subset(std::span<Word> col, std::size_t n, std::size_t k, IndexSampler& draw, bool chosen_when_set) {
  for (std::size_t j = n - k; j < n; ++j) {
    std::size_t t = uniform_below(draw, j + 1);
    if (test_bit(col, t) == chosen_when_set) t = j;
    flip_bit(col, t);
  }
}

void fill_full(std::span<Word> col, std::size_t tests) {
  std::fill(col.begin(), col.end(), ~Word{0});
  if (const std::size_t tail = tests % kWordBits; tail != 0) col.back() &= (Word{1} << tail) - 1;
}

// Each of `tests` bits set independently with probability nu: a binomial
// count of ones placed on a uniform subset.
void fill_bernoulli(std::span<Word> col, std::size_t tests, double nu, Rng& rng, IndexSampler& draw) {
  if (nu <= 0.0) return;
  if (nu == 0.5) {
    fill_random_half(col, tests, rng);
    return;
  }
  const std::size_t ones = std::binomial_distribution<std::size_t>(tests, nu)(rng);
  if (2 * ones <= tests) {
    flip_random_subset(col, tests, ones, draw, true);
  } else {
    fill_full(col, tests);
    flip_random_subset(col, tests, tests - ones, draw, false);
  }
}

}  // namespace

std::vector<double> cca_inclusion_probabilities(const PriorVector& pv, CcaRule rule) {
  const double kbar = pv.expected_defectives();
  std::vector<double> nu(pv.size(), 0.0);
  if (kbar <= 0.0) return nu;
  const double base = std::min(0.5, 1.0 / kbar);
  const double p_max = std::min(pv.max(), 0.5);
  const double log_inv_max = std::log(1.0 / p_max);
  for (std::size_t i = 0; i < pv.size(); ++i) {
    double weight = 1.0;
    if (rule == CcaRule::weighted) {
      const double pi = std::min(pv.p[i], 0.5);
      weight = pi > 0.0 ? std::log(1.0 / pi) / log_inv_max : std::numeric_limits<double>::infinity();
    }
    nu[i] = std::min(0.5, base * weight);
  }
  return nu;
}

Design cca_design(std::size_t tests, const PriorVector& pv, Rng& rng, CcaRule rule) {
  Design design{TestMatrix(pv.pool, tests)};
  if (pv.expected_defectives() <= 0.0) {
    design.degenerate = true;
    return design;
  }
  if (tests == 0 || pv.empty()) return design;

  const auto nu = cca_inclusion_probabilities(pv, rule);
  TestMatrix& tm = design.matrix;
  IndexSampler draw(rng);
  for (std::size_t i = 0; i < pv.size(); ++i) fill_bernoulli(tm.column(i), tests, nu[i], rng, draw);

  Bits occupied(tests);
  for (std::size_t i = 0; i < pv.size(); ++i) bitops::or_into(occupied.words(), tm.column(i));
  for (std::size_t t = 0; t < tests; ++t) {
    while (!occupied.test(t)) {
      for (std::size_t i = 0; i < pv.size(); ++i) {
        if (bernoulli(rng, nu[i])) {
          tm.add(t, i);
          occupied.set(t);
        }
      }
    }
  }
  return design;
}

std::size_t constant_column_weight(std::size_t tests, std::size_t pool_size, double p_ref, ColumnWeightRule rule,
                                   bool* clamped) {
  if (!(p_ref > 0.0)) throw std::invalid_argument("reference probability must be positive");
  if (clamped) *clamped = false;
  if (tests == 0 || pool_size == 0) return 0;
  const double per_item = static_cast<double>(tests) / (static_cast<double>(pool_size) * p_ref);
  const double raw = rule == ColumnWeightRule::ln2_times ? per_item * std::numbers::ln2 : per_item / std::numbers::ln2;
  std::size_t weight = raw >= static_cast<double>(tests) ? tests : static_cast<std::size_t>(std::floor(raw));
  if (weight == 0) {
    weight = 1;
    if (clamped) *clamped = true;
  }
  return std::min(weight, tests);
}

Design constant_column_weight_design(std::size_t tests, std::span<const std::size_t> pool, double p_ref, Rng& rng,
                                     ColumnWeightRule rule) {
  Design design{TestMatrix({pool.begin(), pool.end()}, tests)};
  design.column_weight = constant_column_weight(tests, pool.size(), p_ref, rule, &design.clamped);
  const std::size_t weight = design.column_weight;
  if (weight == 0) return design;

  TestMatrix& tm = design.matrix;
  IndexSampler draw(rng);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto col = tm.column(i);
    if (2 * weight <= tests) {
      flip_random_subset(col, tests, weight, draw, true);
    } else {
      fill_full(col, tests);
      flip_random_subset(col, tests, tests - weight, draw, false);
    }
  }

  Bits occupied(tests);
  for (std::size_t i = 0; i < pool.size(); ++i) bitops::or_into(occupied.words(), tm.column(i));
  if (occupied.count() == tests) return design;

  auto rows = tm.row_weights();
  std::size_t shared_rows = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](auto w) { return w >= 2; }));
  for (std::size_t t = 0; t < tests && shared_rows > 0; ++t) {
    if (rows[t] != 0) continue;
    while (true) {
      const std::size_t member = uniform_below(draw, pool.size());
      // the k-th test of this member, for a uniform k
      std::size_t k = uniform_below(draw, weight);
      std::size_t source = 0;
      for (source = 0; source < tests; ++source)
        if (tm.contains(source, member) && k-- == 0) break;
      if (rows[source] < 2) continue;
      tm.remove(source, member);
      tm.add(t, member);
      if (--rows[source] == 1) --shared_rows;
      rows[t] = 1;
      break;
    }
  }
  return design;
}

Bits apply_tests(const TestMatrix& tm, std::span<const std::uint8_t> truth) {
  if (truth.size() != tm.pool_size()) throw std::invalid_argument("truth length differs from pool size");
  Bits y(tm.tests());
  for (std::size_t m = 0; m < truth.size(); ++m)
    if (truth[m]) bitops::or_into(y.words(), tm.column(m));
  return y;
}

void write_test_matrix(std::ostream& os, const TestMatrix& tm) {
  os << "tests " << tm.tests() << " pool " << tm.pool_size() << '\n';
  for (std::size_t m = 0; m < tm.pool_size(); ++m) os << (m ? " " : "") << tm.pool()[m];
  os << '\n';
  for (std::size_t t = 0; t < tm.tests(); ++t) {
    const auto members = tm.members(t);
    for (std::size_t k = 0; k < members.size(); ++k) os << (k ? " " : "") << tm.pool()[members[k]];
    os << '\n';
  }
}

TestMatrix read_test_matrix(std::istream& is) {
  std::string line, tag_tests, tag_pool;
  std::size_t tests = 0, n = 0;
  if (!std::getline(is, line)) throw std::runtime_error("test matrix: missing header");
  std::istringstream header(line);
  if (!(header >> tag_tests >> tests >> tag_pool >> n) || tag_tests != "tests" || tag_pool != "pool")
    throw std::runtime_error("test matrix: malformed header '" + line + "'");

  std::vector<std::size_t> pool;
  if (!std::getline(is, line)) throw std::runtime_error("test matrix: missing pool line");
  std::istringstream pool_line(line);
  for (std::size_t id; pool_line >> id;) pool.push_back(id);
  if (pool.size() != n) throw std::runtime_error("test matrix: pool line lists a different number of ids");

  std::vector<std::pair<std::size_t, std::size_t>> index;  // id -> position, sorted by id
  for (std::size_t m = 0; m < n; ++m) index.emplace_back(pool[m], m);
  std::sort(index.begin(), index.end());

  TestMatrix tm(std::move(pool), tests);
  for (std::size_t t = 0; t < tests; ++t) {
    if (!std::getline(is, line)) throw std::runtime_error("test matrix: expected " + std::to_string(tests) + " test lines");
    std::istringstream row(line);
    for (std::size_t id; row >> id;) {
      auto it = std::lower_bound(index.begin(), index.end(), std::pair{id, std::size_t{0}});
      if (it == index.end() || it->first != id)
        throw std::runtime_error("test matrix: id " + std::to_string(id) + " is not in the pool");
      tm.add(t, it->second);
    }
  }
  return tm;
}

}  // namespace dgt
