#include "grayhilbert/affine.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "grayhilbert/errors.hpp"

namespace grayhilbert {

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t v : image_) {
    if (v >= image_.size() || seen[v]) throw ContractViolation("not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> img(n);
  std::iota(img.begin(), img.end(), std::size_t{0});
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t j = 0; j < image_.size(); ++j) inv[image_[j]] = j;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& inner) const {
  if (inner.size() != size()) throw ContractViolation("permutation sizes differ");
  std::vector<std::size_t> img(size());
  for (std::size_t j = 0; j < size(); ++j) img[j] = image_[inner.image_[j]];
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t j = 0; j < image_.size(); ++j) {
    if (image_[j] != j) return false;
  }
  return true;
}

std::string Permutation::to_string() const {
  std::string s = "[";
  for (std::size_t j = 0; j < image_.size(); ++j) {
    if (j) s += ' ';
    s += std::to_string(j) + "->" + std::to_string(image_[j]);
  }
  return s + "]";
}

namespace {

void require_axis(std::size_t n, std::size_t d) {
  if (n == 0) throw ContractViolation("dimension must be at least 1");
  if (d >= n) {
    throw RangeError("direction " + std::to_string(d) + " out of range for n=" + std::to_string(n));
  }
}

}  // namespace

Permutation bubble_perm(std::size_t n, std::size_t d) {
  require_axis(n, d);
  std::vector<std::size_t> img(n);
  for (std::size_t j = 0; j < n; ++j) img[j] = j < d ? j : j + 1;
  img[n - 1] = d;
  return Permutation(std::move(img));
}

Permutation ring_perm(std::size_t n, std::size_t d) {
  require_axis(n, d);
  std::vector<std::size_t> img(n);
  for (std::size_t j = 0; j < n; ++j) img[j] = (j + d + 1) % n;
  return Permutation(std::move(img));
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::bubble:
      return "bubble";
    case Variant::ring:
      return "ring";
    case Variant::custom:
      return "custom";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  if (name == "bubble") return Variant::bubble;
  if (name == "ring") return Variant::ring;
  if (name == "custom") return Variant::custom;
  throw ContractViolation("unknown variant '" + name + "'");
}

DigitVec permute_axes(const DigitVec& x, const Permutation& sigma) {
  if (sigma.size() != x.size()) throw ContractViolation("permutation size differs from dimension");
  DigitVec y(x.size(), x.prime());
  for (std::size_t j = 0; j < x.size(); ++j) y.set(sigma(j), x[j]);
  return y;
}

// ---------------------------------------------------------------------------

TransformP2::TransformP2(DigitVec entry, Permutation sigma, Variant variant)
    : entry_(std::move(entry)), sigma_(std::move(sigma)), variant_(variant) {
  if (!entry_.prime().is_two()) throw ContractViolation("TransformP2 requires p = 2");
  if (sigma_.size() != entry_.size()) {
    throw ContractViolation("permutation size differs from dimension");
  }
}

TransformP2 TransformP2::with_variant(DigitVec entry, std::size_t direction, Variant variant) {
  const std::size_t n = entry.size();
  switch (variant) {
    case Variant::bubble:
      return TransformP2(std::move(entry), bubble_perm(n, direction), variant);
    case Variant::ring:
      return TransformP2(std::move(entry), ring_perm(n, direction), variant);
    case Variant::custom:
      break;
  }
  throw ContractViolation("custom transforms need an explicit permutation");
}

TransformP2 TransformP2::identity(std::size_t n) {
  return TransformP2(DigitVec(n, Prime(2)), Permutation::identity(n), Variant::custom);
}

DigitVec TransformP2::apply(const DigitVec& x) const {
  if (x.size() != entry_.size()) throw ContractViolation("dimension mismatch");
  DigitVec y(x.size(), x.prime());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const std::size_t src = sigma_(j);
    y.set(j, x[src] ^ entry_[src]);
  }
  return y;
}

DigitVec TransformP2::apply_inverse(const DigitVec& y) const {
  if (y.size() != entry_.size()) throw ContractViolation("dimension mismatch");
  DigitVec x(y.size(), y.prime());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const std::size_t dst = sigma_(j);
    x.set(dst, y[j] ^ entry_[dst]);
  }
  return x;
}

// ---------------------------------------------------------------------------

TransformOdd::TransformOdd(DigitVec entry, Permutation tau)
    : entry_(std::move(entry)), tau_(std::move(tau)) {
  if (entry_.prime().is_two()) throw ContractViolation("TransformOdd requires odd p");
  if (!is_corner(entry_)) {
    throw ContractViolation("entry point " + entry_.to_string() + " is not a corner");
  }
  if (tau_.size() != entry_.size()) {
    throw ContractViolation("permutation size differs from dimension");
  }
}

TransformOdd::TransformOdd(DigitVec entry)
    : TransformOdd(entry, Permutation::identity(entry.size())) {}

DigitVec TransformOdd::apply(const DigitVec& x) const {
  if (x.size() != entry_.size()) throw ContractViolation("dimension mismatch");
  const unsigned top = x.prime().max_digit();
  DigitVec y(x.size(), x.prime());
  // -(x_i - (p-1)) = (p-1) - x_i on the support of e.
  for (std::size_t i = 0; i < x.size(); ++i) {
    y.set(tau_(i), entry_[i] == 0 ? x[i] : top - x[i]);
  }
  return y;
}

DigitVec TransformOdd::apply_inverse(const DigitVec& y) const {
  if (y.size() != entry_.size()) throw ContractViolation("dimension mismatch");
  const unsigned top = y.prime().max_digit();
  DigitVec x(y.size(), y.prime());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const unsigned v = y[tau_(i)];
    x.set(i, entry_[i] == 0 ? v : top - v);
  }
  return x;
}

DigitVec TransformOdd::apply_linear(const DigitVec& x) const {
  if (x.size() != entry_.size()) throw ContractViolation("dimension mismatch");
  const unsigned p = x.prime().value();
  DigitVec y(x.size(), x.prime());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y.set(tau_(i), entry_[i] == 0 ? x[i] : (p - x[i]) % p);
  }
  return y;
}

TransformOdd TransformOdd::inverse() const {
  // A e = -e^tau, so T^{-1}(x) = A^{-1}(x - e^tau) with permutation tau^{-1}.
  return TransformOdd(permute_axes(entry_, tau_), tau_.inverse());
}

// ---------------------------------------------------------------------------

DigitVec transformed_gray(const TransformP2& t, const DigitVec& x) {
  return t.apply_inverse(gray_encode(x));
}

DigitVec transformed_gray(const TransformOdd& t, const DigitVec& x) {
  return t.apply_inverse(gray_encode(x));
}

DigitVec transformed_gray_inverse(const TransformP2& t, const DigitVec& c) {
  return gray_decode(t.apply(c));
}

DigitVec transformed_gray_inverse(const TransformOdd& t, const DigitVec& c) {
  return gray_decode(t.apply(c));
}

// ---------------------------------------------------------------------------

DigitVec AffineMap::apply(const DigitVec& x) const {
  const std::size_t n = offset.size();
  if (x.size() != n || matrix.size() != n) throw ContractViolation("dimension mismatch");
  const unsigned p = x.prime().value();
  DigitVec y(n, x.prime());
  for (std::size_t r = 0; r < n; ++r) {
    unsigned acc = offset[r];
    for (std::size_t c = 0; c < n; ++c) acc = (acc + matrix[r][c] * x[c]) % p;
    y.set(r, acc);
  }
  return y;
}

AffineMap AffineMap::from(const TransformOdd& t) {
  const std::size_t n = t.entry().size();
  const Prime p = t.entry().prime();
  AffineMap m{std::vector<std::vector<unsigned>>(n, std::vector<unsigned>(n, 0)), DigitVec(n, p)};
  for (std::size_t c = 0; c < n; ++c) {
    const DigitVec col = t.apply_linear(DigitVec::unit(n, p, c));
    for (std::size_t r = 0; r < n; ++r) m.matrix[r][c] = col[r];
  }
  m.offset = -t.apply_linear(t.entry());
  return m;
}

bool validate_membership(const AffineMap& t, const DigitVec& e) {
  const std::size_t n = e.size();
  const Prime p = e.prime();
  if (t.offset.size() != n || t.matrix.size() != n) return false;
  if (!is_corner(e)) return false;
  if (!t.apply(e).is_zero()) return false;
  if (t.apply(opposite(e)) != DigitVec::all_max(n, p)) return false;

  // Unit steps: column i of A must be +-e_{tau(i)} for a permutation tau.
  const unsigned top = p.max_digit();
  std::vector<bool> hit(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t nonzero = 0, row = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (t.matrix[r][c] % p.value() != 0) {
        ++nonzero;
        row = r;
      }
    }
    if (nonzero != 1) return false;
    const unsigned v = t.matrix[row][c] % p.value();
    if (v != 1 && v != top) return false;
    if (hit[row]) return false;
    hit[row] = true;
  }

  auto corner_from_mask = [&](std::uint64_t mask) {
    DigitVec c(n, p);
    for (std::size_t j = 0; j < n; ++j) {
      if ((mask >> j) & 1u) c.set(j, top);
    }
    return c;
  };
  if (n <= kExhaustiveCornerDim) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (!is_corner(t.apply(corner_from_mask(mask)))) return false;
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::bernoulli_distribution coin;
    for (int trial = 0; trial < 4096; ++trial) {
      DigitVec c(n, p);
      for (std::size_t j = 0; j < n; ++j) {
        if (coin(rng)) c.set(j, top);
      }
      if (!is_corner(t.apply(c))) return false;
    }
  }
  return true;
}

bool validate_membership(const TransformOdd& t) {
  return validate_membership(AffineMap::from(t), t.entry());
}

void for_each_permutation(std::size_t n, const std::function<void(const Permutation&)>& f) {
  std::vector<std::size_t> img(n);
  std::iota(img.begin(), img.end(), std::size_t{0});
  do {
    f(Permutation(img));
  } while (std::next_permutation(img.begin(), img.end()));
}

std::vector<TransformP2> enumerate_transforms_p2(const DigitVec& e, std::size_t d) {
  const std::size_t n = e.size();
  if (n > kMaxEnumerationDim) throw RangeError("enumeration limited to n <= 6");
  require_axis(n, d);
  std::vector<TransformP2> out;
  for_each_permutation(n, [&](const Permutation& s) {
    if (s(n - 1) == d) out.emplace_back(e, s, Variant::custom);
  });
  return out;
}

std::vector<TransformOdd> enumerate_transforms_odd(const DigitVec& e) {
  const std::size_t n = e.size();
  if (n > kMaxEnumerationDim) throw RangeError("enumeration limited to n <= 6");
  std::vector<TransformOdd> out;
  for_each_permutation(n, [&](const Permutation& tau) { out.emplace_back(e, tau); });
  return out;
}

}  // namespace grayhilbert
