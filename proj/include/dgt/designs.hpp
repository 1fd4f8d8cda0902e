#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dgt/bits.hpp"
#include "dgt/priors.hpp"
#include "dgt/random.hpp"

namespace dgt {

/// Infection statuses indexed by pool position; 1 = infected.
using StatusVector = std::vector<std::uint8_t>;

/// Nonadaptive pooled-test design: T tests over an ordered pool.
///
/// Stored column-major: each pool member owns a bit row of length T marking
/// the tests it takes part in, so decoders can work column-at-a-time.
class TestMatrix {
 public:
  TestMatrix() = default;
  TestMatrix(std::vector<std::size_t> pool, std::size_t tests);

  std::size_t tests() const { return tests_; }
  std::size_t pool_size() const { return pool_.size(); }
  std::span<const std::size_t> pool() const { return pool_; }
  std::size_t words_per_column() const { return words_; }

  bool contains(std::size_t test, std::size_t member) const;
  void add(std::size_t test, std::size_t member);
  void remove(std::size_t test, std::size_t member);

  std::span<const Word> column(std::size_t member) const { return {bits_.data() + member * words_, words_}; }
  std::span<Word> column(std::size_t member) { return {bits_.data() + member * words_, words_}; }

  /// Pool positions taking part in `test`.
  std::vector<std::size_t> members(std::size_t test) const;
  std::size_t column_weight(std::size_t member) const { return bitops::count(column(member)); }
  std::vector<std::size_t> row_weights() const;

  friend bool operator==(const TestMatrix&, const TestMatrix&) = default;

 private:
  std::vector<std::size_t> pool_;
  std::size_t tests_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
};

/// Outcome of a design draw plus the degeneracies hit while drawing it.
struct Design {
  TestMatrix matrix;
  std::size_t column_weight = 0;  ///< constant-column-weight designs only
  bool clamped = false;           ///< column weight computed below 1 and was raised
  bool degenerate = false;        ///< no usable design (zero expected defectives)
};

enum class CcaRule { weighted, uniform };

/// One singleton test per pool member.
TestMatrix complete_design(std::span<const std::size_t> pool);

/// Randomised design keyed to non-identical priors: item i joins each test
/// independently with probability min(1/2, 1/kbar) * ln(1/p_i)/ln(1/p_max),
/// capped at 1/2, so less likely items sit in more tests. The uniform rule
/// drops the weight. Empty tests are redrawn.
Design cca_design(std::size_t tests, const PriorVector& pv, Rng& rng, CcaRule rule = CcaRule::weighted);

/// Per-test inclusion probabilities used by cca_design.
std::vector<double> cca_inclusion_probabilities(const PriorVector& pv, CcaRule rule);

/// How a constant-column-weight design turns T, n and p_ref into tests per item.
/// ln2_times: L = T ln2 / (n p_ref), about half the tests come out negative.
/// ln2_divides: L = T / (n p_ref ln2), a denser design.
enum class ColumnWeightRule { ln2_times, ln2_divides };

/// Tests per item for a constant-column-weight design: the rule's value
/// floored, at least 1 and at most T.
std::size_t constant_column_weight(std::size_t tests, std::size_t pool_size, double p_ref,
                                   ColumnWeightRule rule = ColumnWeightRule::ln2_times, bool* clamped = nullptr);

/// Every member joins exactly L distinct tests chosen uniformly at random.
/// Empty tests are refilled by moving memberships out of tests shared by
/// several members, which keeps every column weight at L.
Design constant_column_weight_design(std::size_t tests, std::span<const std::size_t> pool, double p_ref, Rng& rng,
                                     ColumnWeightRule rule = ColumnWeightRule::ln2_times);

/// Noiseless OR of the member statuses of each test.
Bits apply_tests(const TestMatrix& tm, std::span<const std::uint8_t> truth);

/// Sparse text format: a header line `tests <T> pool <n>`, a line listing
/// the n pool ids, then one line per test with the ids of its members.
void write_test_matrix(std::ostream& os, const TestMatrix& tm);
TestMatrix read_test_matrix(std::istream& is);

}  // namespace dgt
