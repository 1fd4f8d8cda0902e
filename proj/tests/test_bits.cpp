#include <doctest.h>

#include "dgt/bits.hpp"

using dgt::Bits;

TEST_CASE("bits set, reset and count across word boundaries") {
  Bits b(130);
  CHECK_FALSE(b.any());
  b.set(0);
  b.set(63);
  b.set(64);
  b.set(129);
  CHECK(b.count() == 4);
  CHECK(b.test(63));
  CHECK(b.test(64));
  CHECK_FALSE(b.test(65));
  b.reset(63);
  CHECK(b.count() == 3);
  b.assign(5, true);
  CHECK(b.test(5));
}

TEST_CASE("complement stays inside the logical size") {
  Bits b(70);
  b.set(3);
  const Bits c = ~b;
  CHECK(c.count() == 69);
  CHECK_FALSE(c.test(3));
  CHECK((~c) == b);
}

TEST_CASE("bit operations on spans") {
  Bits a(100), b(100);
  a.set(10);
  a.set(90);
  b.set(10);
  b.set(90);
  b.set(50);
  CHECK(dgt::bitops::subset_of(a.words(), b.words()));
  CHECK_FALSE(dgt::bitops::subset_of(b.words(), a.words()));
  CHECK(dgt::bitops::intersects(a.words(), b.words()));
  Bits c(100);
  c.set(11);
  CHECK_FALSE(dgt::bitops::intersects(a.words(), c.words()));
  dgt::bitops::or_into(c.words(), a.words());
  CHECK(c.count() == 3);
  a |= c;
  CHECK(a.count() == 3);
  a &= b;
  CHECK(a.count() == 2);
}

TEST_CASE("ordering is total and consistent with equality") {
  Bits a(8), b(8);
  CHECK(a == b);
  b.set(1);
  CHECK(a != b);
  CHECK((a < b || b < a));
}
