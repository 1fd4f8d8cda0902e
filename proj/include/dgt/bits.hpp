#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dgt {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

/// Fixed-size bit vector. Used for test outcomes and as the row/column
/// storage of test matrices.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t size) : size_(size), words_(words_for(size), 0) {}

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  bool any() const;
  std::size_t count() const;

  /// Complement restricted to the first size() bits.
  Bits operator~() const;
  Bits& operator|=(const Bits& other);
  Bits& operator&=(const Bits& other);

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  friend bool operator==(const Bits&, const Bits&) = default;
  friend auto operator<=>(const Bits&, const Bits&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

namespace bitops {

bool any(std::span<const Word> a);
std::size_t count(std::span<const Word> a);
bool intersects(std::span<const Word> a, std::span<const Word> b);
/// a is a subset of b
bool subset_of(std::span<const Word> a, std::span<const Word> b);
void or_into(std::span<Word> dst, std::span<const Word> src);

}  // namespace bitops

}  // namespace dgt
