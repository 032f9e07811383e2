#pragma once

// Affine transformations that move and reorient Gray-code pieces.
//
// For p = 2 a transform is T = sigma o A_e: translate by e, then permute
// coordinates so that (T x)_j = (x + e)_{sigma(j)}. The untransformed code
// steps from 0 to e_{n-1}, so T^{-1} o gc starts at e and ends at e + e_d
// with d = sigma(n-1).
//
// For odd p a transform is x -> A(x - e) for a corner e, where A is the
// signed permutation A e_i = -e_{tau(i)} if e_i = p-1 and +e_{tau(i)}
// otherwise. Only (e, tau) is stored; A is never materialised except for
// validation.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "grayhilbert/digits.hpp"

namespace grayhilbert {

/// A bijection of {0, ..., n-1}; image()[j] is the image of j.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> image);
  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t j) const { return image_[j]; }
  const std::vector<std::size_t>& image() const noexcept { return image_; }

  Permutation inverse() const;
  /// (*this o inner)(j) = (*this)(inner(j)).
  Permutation compose(const Permutation& inner) const;
  bool is_identity() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

/// Moves d to position n-1 and shifts the positions d..n-2 up by one.
Permutation bubble_perm(std::size_t n, std::size_t d);
/// The rotation j -> (j + d + 1) mod n.
Permutation ring_perm(std::size_t n, std::size_t d);

/// Coordinate-permutation schedule of a Gray-Hilbert curve.
enum class Variant { bubble, ring, custom };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

/// Moves axis j of x to axis sigma(j).
DigitVec permute_axes(const DigitVec& x, const Permutation& sigma);

class TransformP2 {
 public:
  /// Requires p = 2 and sigma(n-1) = d.
  TransformP2(DigitVec entry, Permutation sigma, Variant variant = Variant::custom);

  static TransformP2 with_variant(DigitVec entry, std::size_t direction, Variant variant);
  static TransformP2 identity(std::size_t n);

  const DigitVec& entry() const noexcept { return entry_; }
  const Permutation& sigma() const noexcept { return sigma_; }
  std::size_t direction() const noexcept { return sigma_(sigma_.size() - 1); }
  Variant variant() const noexcept { return variant_; }

  DigitVec apply(const DigitVec& x) const;
  DigitVec apply_inverse(const DigitVec& y) const;

 private:
  DigitVec entry_;
  Permutation sigma_;
  Variant variant_;
};

class TransformOdd {
 public:
  /// Requires odd p and a corner entry point.
  TransformOdd(DigitVec entry, Permutation tau);
  explicit TransformOdd(DigitVec entry);  // tau = identity

  const DigitVec& entry() const noexcept { return entry_; }
  const Permutation& tau() const noexcept { return tau_; }

  DigitVec apply(const DigitVec& x) const;
  DigitVec apply_inverse(const DigitVec& y) const;
  /// The linear part A applied to x (no translation).
  DigitVec apply_linear(const DigitVec& x) const;

  /// T^{-1} as a member of the family based at the permuted entry point.
  TransformOdd inverse() const;

 private:
  DigitVec entry_;
  Permutation tau_;
};

/// T^{-1}(gc(x)) and its inverse gc^{-1}(T(c)).
DigitVec transformed_gray(const TransformP2& t, const DigitVec& x);
DigitVec transformed_gray(const TransformOdd& t, const DigitVec& x);
DigitVec transformed_gray_inverse(const TransformP2& t, const DigitVec& c);
DigitVec transformed_gray_inverse(const TransformOdd& t, const DigitVec& c);

/// A general affine map x -> Ax + c over F_p, used to test membership.
struct AffineMap {
  std::vector<std::vector<unsigned>> matrix;  // matrix[row][col]
  DigitVec offset;

  DigitVec apply(const DigitVec& x) const;
  static AffineMap from(const TransformOdd& t);
};

/// Checks T(e) = 0, T(e^perp) = d, T(C) subset of C and that unit steps map to
/// signed unit steps along a permutation of the axes. Corners are enumerated
/// exhaustively up to kExhaustiveCornerDim and sampled beyond.
bool validate_membership(const AffineMap& t, const DigitVec& e);
bool validate_membership(const TransformOdd& t);

inline constexpr std::size_t kExhaustiveCornerDim = 12;
inline constexpr std::size_t kMaxEnumerationDim = 6;

/// All (n-1)! transforms with prescribed entry e and direction d (p = 2).
std::vector<TransformP2> enumerate_transforms_p2(const DigitVec& e, std::size_t d);
/// All n! members of the family based at the corner e (odd p).
std::vector<TransformOdd> enumerate_transforms_odd(const DigitVec& e);

/// Calls f on every permutation of {0,...,n-1} in lexicographic order.
void for_each_permutation(std::size_t n, const std::function<void(const Permutation&)>& f);

}  // namespace grayhilbert
