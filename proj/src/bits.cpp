#include "dgt/bits.hpp"

#include <bit>
#include <cassert>

namespace dgt {

namespace bitops {

bool any(std::span<const Word> a) {
  for (Word w : a)
    if (w) return true;
  return false;
}

std::size_t count(std::span<const Word> a) {
  std::size_t n = 0;
  for (Word w : a) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool intersects(std::span<const Word> a, std::span<const Word> b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

bool subset_of(std::span<const Word> a, std::span<const Word> b) {
  assert(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

void or_into(std::span<Word> dst, std::span<const Word> src) {
  assert(dst.size() == src.size());
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
}

}  // namespace bitops

bool Bits::any() const { return bitops::any(words_); }

std::size_t Bits::count() const { return bitops::count(words_); }

Bits Bits::operator~() const {
  Bits out(size_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  if (const std::size_t tail = size_ % kWordBits; tail != 0 && !out.words_.empty())
    out.words_.back() &= (Word{1} << tail) - 1;
  return out;
}

Bits& Bits::operator|=(const Bits& other) {
  assert(size_ == other.size_);
  bitops::or_into(words_, other.words_);
  return *this;
}

Bits& Bits::operator&=(const Bits& other) {
  assert(size_ == other.size_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

}  // namespace dgt
