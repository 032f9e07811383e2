#pragma once

// Digit-level arithmetic over F_p^n: base-p representations, the reflected
// p-ary Gray code and its inverse, opposite points, corners and the helpers
// that locate the single axis along which consecutive codewords differ.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace grayhilbert {

/// A small prime radix, validated by trial division on construction.
class Prime {
 public:
  static constexpr unsigned kMax = 251;  // digits are stored as bytes

  explicit Prime(unsigned value);

  unsigned value() const noexcept { return value_; }
  std::uint8_t max_digit() const noexcept { return static_cast<std::uint8_t>(value_ - 1); }
  bool is_two() const noexcept { return value_ == 2; }

  friend bool operator==(Prime, Prime) = default;

 private:
  unsigned value_;
};

bool is_prime(unsigned value) noexcept;

/// An element of F_p^n. Index 0 holds the least significant digit; index
/// n-1 the most significant one. Textual forms list digits most significant
/// first, i.e. (x_{n-1}, ..., x_0).
class DigitVec {
 public:
  DigitVec(std::size_t n, Prime p);

  /// Builds a vector from digits written most significant first.
  static DigitVec from_msb(std::initializer_list<unsigned> msb_first, Prime p);
  static DigitVec from_msb(std::span<const unsigned> msb_first, Prime p);

  /// The all-(p-1) vector d.
  static DigitVec all_max(std::size_t n, Prime p);
  /// The standard unit vector e_axis.
  static DigitVec unit(std::size_t n, Prime p, std::size_t axis);

  std::size_t size() const noexcept { return digits_.size(); }
  Prime prime() const noexcept { return prime_; }

  std::uint8_t operator[](std::size_t axis) const { return digits_[axis]; }
  void set(std::size_t axis, unsigned digit);

  std::span<const std::uint8_t> digits() const noexcept { return digits_; }

  bool is_zero() const noexcept;

  /// Componentwise sum / difference mod p.
  DigitVec operator+(const DigitVec& other) const;
  DigitVec operator-(const DigitVec& other) const;
  DigitVec operator-() const;

  /// "(x_{n-1},...,x_0)".
  std::string to_string() const;

  friend bool operator==(const DigitVec& a, const DigitVec& b) {
    return a.prime_ == b.prime_ && a.digits_ == b.digits_;
  }
  /// Orders by numeric value (most significant digit first).
  friend std::strong_ordering operator<=>(const DigitVec& a, const DigitVec& b);

 private:
  Prime prime_;
  std::vector<std::uint8_t> digits_;
};

/// p^n, or throws RangeError if it does not fit in 64 bits.
std::uint64_t checked_power(unsigned p, std::size_t n);

/// Base-p representation of i with n digits. Throws RangeError unless
/// 0 <= i < p^n.
DigitVec bin_digits(std::uint64_t i, std::size_t n, Prime p);

/// Inverse of bin_digits. Throws RangeError if the value exceeds 64 bits.
std::uint64_t digits_value(const DigitVec& x);

/// Adds one with carry; returns false on wraparound (x was d).
bool increment(DigitVec& x);
/// Subtracts one with borrow; returns false on wraparound (x was 0).
bool decrement(DigitVec& x);

/// The reflected p-ary Gray codeword gc_n(x) for the index with digits x.
DigitVec gray_encode(const DigitVec& x);
/// Inverse of gray_encode. Coincides with gray_encode for odd p.
DigitVec gray_decode(const DigitVec& g);

/// d - x componentwise.
DigitVec opposite(const DigitVec& x);

/// Every digit is 0 or p-1.
bool is_corner(const DigitVec& x) noexcept;

/// Number of differing positions. Throws ContractViolation on shape mismatch.
std::size_t hamming(const DigitVec& x, const DigitVec& y);

/// Number of consecutive digits equal to target, counted from index 0.
std::size_t trailing_count(const DigitVec& x, unsigned target);

struct GrayStep {
  std::size_t axis;
  int sign;  // +1 or -1

  friend bool operator==(const GrayStep&, const GrayStep&) = default;
};

/// The unit step gc(bin(i+1)) - gc(bin(i)) = sign * e_axis, i < p^n - 1.
GrayStep gray_delta(const DigitVec& index);
GrayStep gray_delta(std::uint64_t i, std::size_t n, Prime p);

}  // namespace grayhilbert
