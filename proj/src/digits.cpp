#include "grayhilbert/digits.hpp"

#include <algorithm>
#include <limits>

#include "grayhilbert/errors.hpp"

namespace grayhilbert {

bool is_prime(unsigned value) noexcept {
  if (value < 2) return false;
  for (unsigned d = 2; d * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

Prime::Prime(unsigned value) : value_(value) {
  if (!is_prime(value)) {
    throw ContractViolation("radix " + std::to_string(value) + " is not prime");
  }
  if (value > kMax) {
    throw RangeError("prime " + std::to_string(value) + " exceeds the supported maximum " +
                     std::to_string(kMax));
  }
}

DigitVec::DigitVec(std::size_t n, Prime p) : prime_(p), digits_(n, 0) {
  if (n == 0) throw ContractViolation("dimension must be at least 1");
}

DigitVec DigitVec::from_msb(std::initializer_list<unsigned> msb_first, Prime p) {
  return from_msb(std::span<const unsigned>(msb_first.begin(), msb_first.size()), p);
}

DigitVec DigitVec::from_msb(std::span<const unsigned> msb_first, Prime p) {
  DigitVec v(msb_first.size(), p);
  const std::size_t n = msb_first.size();
  for (std::size_t k = 0; k < n; ++k) v.set(n - 1 - k, msb_first[k]);
  return v;
}

DigitVec DigitVec::all_max(std::size_t n, Prime p) {
  DigitVec v(n, p);
  std::fill(v.digits_.begin(), v.digits_.end(), p.max_digit());
  return v;
}

DigitVec DigitVec::unit(std::size_t n, Prime p, std::size_t axis) {
  if (axis >= n) throw RangeError("axis " + std::to_string(axis) + " out of range");
  DigitVec v(n, p);
  v.digits_[axis] = 1;
  return v;
}

void DigitVec::set(std::size_t axis, unsigned digit) {
  if (axis >= digits_.size()) throw RangeError("axis " + std::to_string(axis) + " out of range");
  if (digit >= prime_.value()) {
    throw RangeError("digit " + std::to_string(digit) + " not below p=" +
                     std::to_string(prime_.value()));
  }
  digits_[axis] = static_cast<std::uint8_t>(digit);
}

bool DigitVec::is_zero() const noexcept {
  return std::all_of(digits_.begin(), digits_.end(), [](std::uint8_t d) { return d == 0; });
}

namespace {

void require_same_shape(const DigitVec& a, const DigitVec& b) {
  if (a.size() != b.size() || a.prime() != b.prime()) {
    throw ContractViolation("digit vectors differ in dimension or prime");
  }
}

}  // namespace

DigitVec DigitVec::operator+(const DigitVec& other) const {
  require_same_shape(*this, other);
  DigitVec r(*this);
  const unsigned p = prime_.value();
  for (std::size_t j = 0; j < digits_.size(); ++j) {
    r.digits_[j] = static_cast<std::uint8_t>((digits_[j] + other.digits_[j]) % p);
  }
  return r;
}

DigitVec DigitVec::operator-(const DigitVec& other) const {
  require_same_shape(*this, other);
  DigitVec r(*this);
  const unsigned p = prime_.value();
  for (std::size_t j = 0; j < digits_.size(); ++j) {
    r.digits_[j] = static_cast<std::uint8_t>((digits_[j] + p - other.digits_[j]) % p);
  }
  return r;
}

DigitVec DigitVec::operator-() const {
  DigitVec r(*this);
  const unsigned p = prime_.value();
  for (auto& d : r.digits_) d = static_cast<std::uint8_t>((p - d) % p);
  return r;
}

std::string DigitVec::to_string() const {
  std::string s = "(";
  for (std::size_t k = digits_.size(); k-- > 0;) {
    s += std::to_string(digits_[k]);
    if (k != 0) s += ',';
  }
  s += ')';
  return s;
}

std::strong_ordering operator<=>(const DigitVec& a, const DigitVec& b) {
  require_same_shape(a, b);
  for (std::size_t k = a.size(); k-- > 0;) {
    if (auto c = a.digits_[k] <=> b.digits_[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::uint64_t checked_power(unsigned p, std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (r > std::numeric_limits<std::uint64_t>::max() / p) {
      throw RangeError(std::to_string(p) + "^" + std::to_string(n) + " exceeds 64 bits");
    }
    r *= p;
  }
  return r;
}

DigitVec bin_digits(std::uint64_t i, std::size_t n, Prime p) {
  DigitVec x(n, p);
  const unsigned base = p.value();
  std::uint64_t rest = i;
  for (std::size_t j = 0; j < n && rest != 0; ++j) {
    x.set(j, static_cast<unsigned>(rest % base));
    rest /= base;
  }
  if (rest != 0) {
    throw RangeError("index " + std::to_string(i) + " not below " + std::to_string(base) + "^" +
                     std::to_string(n));
  }
  return x;
}

std::uint64_t digits_value(const DigitVec& x) {
  const std::uint64_t base = x.prime().value();
  std::uint64_t v = 0;
  for (std::size_t k = x.size(); k-- > 0;) {
    if (v > (std::numeric_limits<std::uint64_t>::max() - x[k]) / base) {
      throw RangeError("digit vector value exceeds 64 bits");
    }
    v = v * base + x[k];
  }
  return v;
}

bool increment(DigitVec& x) {
  const unsigned top = x.prime().max_digit();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != top) {
      x.set(j, x[j] + 1u);
      return true;
    }
    x.set(j, 0);
  }
  return false;
}

bool decrement(DigitVec& x) {
  const unsigned top = x.prime().max_digit();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0) {
      x.set(j, x[j] - 1u);
      return true;
    }
    x.set(j, top);
  }
  return false;
}

namespace {

// One most-significant-first pass: a digit is complemented while the number
// of odd codeword digits emitted so far is odd. The same pass maps codewords
// back to indices, because complementing preserves parity for odd p and for
// p = 2 the flag then tracks the index digit above.
DigitVec reflect_pass(const DigitVec& in, bool flag_from_output) {
  DigitVec out(in.size(), in.prime());
  const unsigned top = in.prime().max_digit();
  bool flip = false;
  for (std::size_t k = in.size(); k-- > 0;) {
    const unsigned src = in[k];
    const unsigned dst = flip ? top - src : src;
    out.set(k, dst);
    const unsigned codeword_digit = flag_from_output ? dst : src;
    if (codeword_digit % 2 == 1) flip = !flip;
  }
  return out;
}

}  // namespace

DigitVec gray_encode(const DigitVec& x) { return reflect_pass(x, true); }

DigitVec gray_decode(const DigitVec& g) { return reflect_pass(g, false); }

DigitVec opposite(const DigitVec& x) { return DigitVec::all_max(x.size(), x.prime()) - x; }

bool is_corner(const DigitVec& x) noexcept {
  const auto top = x.prime().max_digit();
  const auto ds = x.digits();
  return std::all_of(ds.begin(), ds.end(), [top](std::uint8_t d) { return d == 0 || d == top; });
}

std::size_t hamming(const DigitVec& x, const DigitVec& y) {
  require_same_shape(x, y);
  std::size_t count = 0;
  for (std::size_t j = 0; j < x.size(); ++j) count += x[j] != y[j];
  return count;
}

std::size_t trailing_count(const DigitVec& x, unsigned target) {
  if (target >= x.prime().value()) throw RangeError("target digit not below p");
  std::size_t count = 0;
  while (count < x.size() && x[count] == target) ++count;
  return count;
}

GrayStep gray_delta(const DigitVec& index) {
  const unsigned top = index.prime().max_digit();
  const std::size_t axis = trailing_count(index, top);
  if (axis == index.size()) throw RangeError("last Gray codeword has no successor");
  // Digits above `axis` agree between i and i+1, so the complement flag at
  // `axis` is shared and decides the sign of the step.
  bool flip = false;
  for (std::size_t k = index.size(); k-- > axis + 1;) {
    const unsigned g = flip ? top - index[k] : index[k];
    if (g % 2 == 1) flip = !flip;
  }
  return {axis, flip ? -1 : +1};
}

GrayStep gray_delta(std::uint64_t i, std::size_t n, Prime p) {
  return gray_delta(bin_digits(i, n, p));
}

}  // namespace grayhilbert
