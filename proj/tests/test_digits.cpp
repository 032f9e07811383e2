#include <set>

#include "doctest.h"
#include "grayhilbert/digits.hpp"
#include "grayhilbert/errors.hpp"
#include "oracles.hpp"

using namespace grayhilbert;

namespace {

DigitVec msb(std::initializer_list<unsigned> d, unsigned p) { return DigitVec::from_msb(d, Prime(p)); }

}  // namespace

TEST_CASE("prime validation") {
  CHECK_NOTHROW(Prime(2));
  CHECK_NOTHROW(Prime(3));
  CHECK_NOTHROW(Prime(251));
  CHECK_THROWS_AS(Prime(1), ContractViolation);
  CHECK_THROWS_AS(Prime(9), ContractViolation);
  CHECK_THROWS_AS(Prime(257), RangeError);
}

TEST_CASE("bin_digits and digits_value") {
  CHECK(bin_digits(0, 3, Prime(2)) == msb({0, 0, 0}, 2));
  CHECK(bin_digits(5, 3, Prime(2)) == msb({1, 0, 1}, 2));
  CHECK(bin_digits(5, 2, Prime(3)) == msb({1, 2}, 3));
  CHECK_THROWS_AS(bin_digits(8, 3, Prime(2)), RangeError);
  CHECK_THROWS_AS(bin_digits(9, 2, Prime(3)), RangeError);

  CHECK(digits_value(msb({0, 0, 0}, 2)) == 0);
  CHECK(digits_value(msb({1, 0, 1}, 2)) == 5);
  CHECK(digits_value(msb({1, 2}, 3)) == 5);

  for (unsigned p : {2u, 3u, 5u, 7u}) {
    for (std::uint64_t i = 0; i < oracle::ipow(p, 3); ++i) {
      CHECK(digits_value(bin_digits(i, 3, Prime(p))) == i);
    }
  }
}

TEST_CASE("increment and decrement carry like integers") {
  DigitVec x(3, Prime(3));
  for (std::uint64_t i = 0; i + 1 < 27; ++i) {
    REQUIRE(increment(x));
    CHECK(digits_value(x) == i + 1);
  }
  CHECK_FALSE(increment(x));
  CHECK(x.is_zero());
  CHECK_FALSE(decrement(x));
  CHECK(digits_value(x) == 26);
}

TEST_CASE("gray_encode examples") {
  CHECK(gray_encode(msb({1, 0, 1}, 2)) == msb({1, 1, 1}, 2));
  CHECK(gray_encode(msb({1, 2}, 3)) == msb({1, 0}, 3));
  for (unsigned p : {2u, 3u, 5u}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      CHECK(gray_encode(DigitVec(n, Prime(p))).is_zero());
      // odd p ends at the opposite corner, p = 2 at e_{n-1}
      const auto last = gray_encode(DigitVec::all_max(n, Prime(p)));
      CHECK(last == (p == 2 ? DigitVec::unit(n, Prime(p), n - 1) : DigitVec::all_max(n, Prime(p))));
    }
  }
}

TEST_CASE("gray_encode agrees with the reflected recursion") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      if (oracle::ipow(p, n) > 3000) continue;
      const auto seq = oracle::reflected_gray(n, p);
      for (std::uint64_t i = 0; i < seq.size(); ++i) {
        REQUIRE(gray_encode(bin_digits(i, n, Prime(p))) == oracle::to_vec(seq[i], p));
      }
    }
  }
}

TEST_CASE("p = 2 reduces to x xor (x >> 1)") {
  for (std::uint64_t i = 0; i < 256; ++i) {
    CHECK(gray_encode(bin_digits(i, 8, Prime(2))) == bin_digits(i ^ (i >> 1), 8, Prime(2)));
  }
}

TEST_CASE("gray_decode examples and round trip") {
  CHECK(gray_decode(msb({1, 0}, 3)) == msb({1, 2}, 3));
  CHECK(gray_decode(msb({1, 1, 1}, 2)) == msb({1, 0, 1}, 2));
  CHECK(gray_decode(DigitVec(4, Prime(5))).is_zero());
  for (unsigned p : {2u, 3u, 5u}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      for (std::uint64_t i = 0; i < oracle::ipow(p, n); ++i) {
        const auto x = bin_digits(i, n, Prime(p));
        REQUIRE(gray_decode(gray_encode(x)) == x);
        REQUIRE(gray_encode(gray_decode(x)) == x);
      }
    }
  }
}

TEST_CASE("p = 2 decode is the prefix parity") {
  for (std::uint64_t i = 0; i < 64; ++i) {
    const auto g = bin_digits(i, 6, Prime(2));
    const auto x = gray_decode(g);
    for (std::size_t j = 0; j < 6; ++j) {
      unsigned parity = 0;
      for (std::size_t m = j; m < 6; ++m) parity ^= g[m];
      CHECK(x[j] == parity);
    }
  }
}

TEST_CASE("opposite and corners") {
  CHECK(opposite(msb({1, 0}, 3)) == msb({1, 2}, 3));
  CHECK(opposite(msb({1, 1, 1}, 2)) == msb({0, 0, 0}, 2));
  CHECK(opposite(DigitVec(4, Prime(5))) == DigitVec::all_max(4, Prime(5)));
  CHECK(is_corner(msb({2, 0}, 3)));
  CHECK_FALSE(is_corner(msb({1, 2}, 3)));
  for (std::uint64_t i = 0; i < 16; ++i) CHECK(is_corner(bin_digits(i, 4, Prime(2))));
  for (std::uint64_t i = 0; i < 125; ++i) {
    const auto x = bin_digits(i, 3, Prime(5));
    CHECK(opposite(opposite(x)) == x);
  }
}

TEST_CASE("hamming and trailing_count") {
  CHECK(hamming(msb({0, 0}, 3), msb({0, 0}, 3)) == 0);
  CHECK(hamming(msb({1, 2}, 3), msb({1, 0}, 3)) == 1);
  CHECK_THROWS_AS(hamming(DigitVec(2, Prime(3)), DigitVec(3, Prime(3))), ContractViolation);
  CHECK_THROWS_AS(hamming(DigitVec(2, Prime(3)), DigitVec(2, Prime(5))), ContractViolation);

  CHECK(trailing_count(msb({0, 1, 1}, 2), 1) == 2);
  CHECK(trailing_count(msb({0, 1, 1}, 2), 1) % 3 == 2);
  CHECK(trailing_count(msb({1, 2}, 3), 2) == 1);
  CHECK(trailing_count(msb({2, 2, 0}, 3), 2) == 0);
  CHECK_THROWS_AS(trailing_count(msb({1, 2}, 3), 3), RangeError);
}

TEST_CASE("gray_delta examples") {
  CHECK(gray_delta(2, 2, Prime(3)) == GrayStep{1, +1});
  CHECK(gray_delta(3, 2, Prime(3)) == GrayStep{0, -1});
  CHECK(gray_delta(0, 3, Prime(2)) == GrayStep{0, +1});
  CHECK_THROWS_AS(gray_delta(8, 2, Prime(3)), RangeError);
  CHECK_THROWS_AS(gray_delta(7, 3, Prime(2)), RangeError);
}

TEST_CASE("gray_delta matches the direct difference") {
  for (unsigned p : {2u, 3u, 5u}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto seq = oracle::reflected_gray(n, p);
      for (std::uint64_t i = 0; i + 1 < seq.size(); ++i) {
        const auto step = gray_delta(i, n, Prime(p));
        CHECK(step.axis == trailing_count(bin_digits(i, n, Prime(p)), p - 1) % n);
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t axis = n - 1 - k;
          const int diff = static_cast<int>(seq[i + 1][k]) - static_cast<int>(seq[i][k]);
          REQUIRE(diff == (axis == step.axis ? step.sign : 0));
        }
      }
    }
  }
}

TEST_CASE("reversal: the sequence read backwards is the complement") {
  for (unsigned p : {3u, 5u}) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto size = oracle::ipow(p, n);
      for (std::uint64_t i = 0; i < size; ++i) {
        const auto x = bin_digits(i, n, Prime(p));
        CHECK(bin_digits(size - 1 - i, n, Prime(p)) == opposite(x));
        CHECK(gray_encode(bin_digits(size - 1 - i, n, Prime(p))) == opposite(gray_encode(x)));
      }
    }
  }
}

TEST_CASE("odd p: the code is not linear") {
  // x = (0,..,1,0), y = (0,..,p-1,0) gives gc(x) + gc(y) = (0,..,0,p-1) != gc(0).
  for (unsigned p : {3u, 5u, 7u}) {
    const auto x = msb({0, 1, 0}, p);
    const auto y = DigitVec::from_msb({0, p - 1, 0}, Prime(p));
    CHECK(gray_encode(x) == DigitVec::from_msb({0, 1, p - 1}, Prime(p)));
    CHECK(gray_encode(y) == DigitVec::from_msb({0, p - 1, 0}, Prime(p)));
    CHECK((gray_encode(x) + gray_encode(y)) == DigitVec::from_msb({0, 0, p - 1}, Prime(p)));
    CHECK(gray_encode(x + y) != gray_encode(x) + gray_encode(y));
  }
}

TEST_CASE("bijectivity on small spaces") {
  for (unsigned p : {2u, 3u, 5u}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      std::set<std::uint64_t> images;
      for (std::uint64_t i = 0; i < oracle::ipow(p, n); ++i) {
        images.insert(digits_value(gray_encode(bin_digits(i, n, Prime(p)))));
      }
      CHECK(images.size() == oracle::ipow(p, n));
    }
  }
}
