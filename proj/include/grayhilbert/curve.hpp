#pragma once

// Forward and inverse Gray-Hilbert curve maps at iteration depth k.
//
// A curve position is a CurveIndex: k limbs in [0, p^n), coarsest first.
// A cell is a CellWord: k digit vectors, the coefficient at level lambda
// picking one of the p^n sub-cubes of the level-lambda cube. Both directions
// run a per-limb state machine. The state is the absolute affine transform
// of the current sub-cube: its entry corner, and the coordinate order
// (sigma for p = 2, tau for odd p). Children are oriented by composing a
// local transform, chosen by the variant, onto the parent's.
//
// Real vectors list the most significant axis first, like the text form of
// a DigitVec: x[0] is axis n-1 and x[n-1] is axis 0.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grayhilbert/affine.hpp"
#include "grayhilbert/digits.hpp"

namespace grayhilbert {

/// What a custom order rule sees when a child sub-cube is oriented.
struct LocalPiece {
  std::size_t n;
  DigitVec entry;                          // entry corner in the parent's frame
  std::optional<std::size_t> direction;    // p = 2 only: the child's direction
};

/// Returns the child's coordinate order relative to its parent. For p = 2
/// the result must map n-1 to *piece.direction.
using LocalOrderFn = std::function<Permutation(const LocalPiece& piece)>;

struct CurveParams {
  Prime p{2};
  std::size_t n = 2;
  std::size_t k = 1;
  Variant variant = Variant::bubble;
  LocalOrderFn custom_order;  // required iff variant == custom

  void validate() const;
};

struct CurveState {
  DigitVec entry;         // absolute entry corner of the current sub-cube
  std::size_t direction;  // p = 2: order(n-1); unused for odd p
  Permutation order;      // sigma (p = 2) or tau (odd p), absolute

  friend bool operator==(const CurveState&, const CurveState&) = default;
};

struct CurveIndex {
  std::vector<DigitVec> limbs;  // limbs[0] is the coarsest (most significant)

  /// Splits value into k base-p^n limbs; RangeError if it does not fit.
  static CurveIndex from_integer(std::uint64_t value, const CurveParams& params);
  /// RangeError if the value exceeds 64 bits.
  std::uint64_t to_integer() const;
  /// Limbs as integers, "[3,1]".
  std::string to_string() const;

  friend bool operator==(const CurveIndex&, const CurveIndex&) = default;
  friend auto operator<=>(const CurveIndex& a, const CurveIndex& b) {
    return a.limbs <=> b.limbs;
  }
};

struct CellWord {
  std::vector<DigitVec> coeffs;  // coeffs[0] is the coarsest level

  std::string to_string() const;

  friend bool operator==(const CellWord&, const CellWord&) = default;
};

/// Entry corner of sub-cube i in the first iteration of the untransformed
/// odd-p curve. Satisfies eps(0) = 0 and eps(i+1) = eps(i)^perp + Delta(i),
/// which gives the closed form eps(i)_a = (p-1) * parity of the digit sum of
/// i without digit a.
DigitVec entry_point(const DigitVec& limb);
DigitVec entry_point(std::uint64_t i, std::size_t n, Prime p);

/// Entry corner of sub-cube i of the untransformed binary Gray code:
/// 0 for i = 0, else gc(2 floor((i-1)/2)).
DigitVec entry_point_p2(const DigitVec& limb);
/// Direction of sub-cube i: tau_n of i for odd i, of i-1 for even i > 0,
/// 0 for i = 0, where tau_n counts trailing ones mod n.
std::size_t direction_p2(const DigitVec& limb);

class Curve {
 public:
  explicit Curve(CurveParams params);

  const CurveParams& params() const noexcept { return params_; }
  Prime prime() const noexcept { return params_.p; }
  std::size_t dim() const noexcept { return params_.n; }
  std::size_t depth() const noexcept { return params_.k; }

  /// entry 0, identity order (so the first iteration is the plain Gray code).
  CurveState initial_state() const;
  /// Orientation of the sub-cube reached through `limb`.
  CurveState step(const CurveState& state, const DigitVec& limb) const;

  /// Coefficient (cell digit vector) of `limb` inside the current sub-cube.
  DigitVec cell_digit(const CurveState& state, const DigitVec& limb) const;
  /// Inverse of cell_digit.
  DigitVec limb_of(const CurveState& state, const DigitVec& coeff) const;

  CellWord index_to_cell(const CurveIndex& index) const;
  CurveIndex cell_to_index(const CellWord& word) const;

  /// Lower corner of the cell, axis j = sum_lambda coeff_lambda[j] p^-(lambda+1),
  /// listed from axis n-1 down to axis 0.
  std::vector<double> coord(const CellWord& word) const;
  /// The cell of depth k containing x (half-open cells, 1.0 clamped into the
  /// top cell). RangeError for components outside [0, 1].
  CellWord quantize(std::span<const double> x) const;

  /// Integer cell coordinates in [0, p^k), axis n-1 first (requires p^k < 2^64).
  std::vector<std::uint64_t> cell_coordinates(const CellWord& word) const;

 private:
  Permutation local_order(const DigitVec& local_entry, std::optional<std::size_t> direction) const;

  CurveParams params_;
};

/// The p = 2 state transition for a given variant.
CurveState step_state_p2(const CurveState& state, const DigitVec& limb, Variant variant);
/// The odd-p state transition with the identity local order.
CurveState step_state_odd(const CurveState& state, const DigitVec& limb);

/// p^-l where l is the first level at which the words differ; 0 if equal.
double padic_distance(const CellWord& a, const CellWord& b);

/// Base-p digits of floor(x * p^depth), most significant first, with 1.0
/// mapped to all (p-1) digits.
std::vector<std::uint8_t> axis_digits(double x, Prime p, std::size_t depth);

}  // namespace grayhilbert
