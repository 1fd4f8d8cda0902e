#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dgt/bits.hpp"
#include "dgt/designs.hpp"

namespace dgt {

inline constexpr std::size_t kDefaultEnumerationCap = 20;
/// Log-probabilities closer than this are treated as tied.
inline constexpr double kLogTieTolerance = 1e-12;

struct DecodeOutcome {
  StatusVector estimate;
  /// 1 where the test results certify the estimate (member of a negative
  /// test, or sole unexplained member of a positive test); 0 where assumed.
  std::vector<std::uint8_t> definite;
};

/// Thrown when exhaustive enumeration is requested over a pool above the cap.
class EnumerationLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Members of negative tests are clear, everyone else is declared infected.
DecodeOutcome comp_decode(const TestMatrix& tm, const Bits& y);

/// Definite defectives: clear members of negative tests, declare infected any
/// remaining member that is alone among the remaining members of some positive
/// test, and assume everyone else clear. Never produces a false positive.
DecodeOutcome dd_decode(const TestMatrix& tm, const Bits& y);

/// Most probable status vector consistent with `y` under independent priors.
/// Ties go to the lexicographically smallest vector (pool position 0 most
/// significant, 0 before 1).
DecodeOutcome map_decode(const TestMatrix& tm, const Bits& y, std::span<const double> priors,
                         std::size_t cap = kDefaultEnumerationCap);

using Decoder = std::function<StatusVector(const TestMatrix&, const Bits&)>;

/// Sum over all status vectors u of Pr(u) * [decoder(tm(u)) != u].
double exact_error_probability(const TestMatrix& tm, std::span<const double> priors, const Decoder& decoder,
                               std::size_t cap = kDefaultEnumerationCap);

/// Error probability of the MAP decoder computed directly as
/// sum over outcomes y of (Pr(y) - max_{u: tm(u)=y} Pr(u)).
double optimal_error_probability(const TestMatrix& tm, std::span<const double> priors,
                                 std::size_t cap = kDefaultEnumerationCap);

/// Probability of one status vector under independent priors.
double status_probability(std::span<const std::uint8_t> u, std::span<const double> priors);

}  // namespace dgt
