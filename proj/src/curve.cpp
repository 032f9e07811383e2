#include "grayhilbert/curve.hpp"

#include <cmath>
#include <limits>

#include "grayhilbert/errors.hpp"

namespace grayhilbert {

void CurveParams::validate() const {
  if (n == 0) throw ContractViolation("dimension n must be at least 1");
  if (k == 0) throw ContractViolation("iteration depth k must be at least 1");
  if (variant == Variant::custom && !custom_order) {
    throw ContractViolation("custom variant requires an order rule");
  }
}

// ---------------------------------------------------------------------------

CurveIndex CurveIndex::from_integer(std::uint64_t value, const CurveParams& params) {
  params.validate();
  CurveIndex idx;
  idx.limbs.assign(params.k, DigitVec(params.n, params.p));
  const unsigned p = params.p.value();
  std::uint64_t rest = value;
  // Digits are consumed least significant first: the last limb is the finest.
  for (std::size_t l = params.k; l-- > 0;) {
    for (std::size_t j = 0; j < params.n; ++j) {
      idx.limbs[l].set(j, static_cast<unsigned>(rest % p));
      rest /= p;
    }
  }
  if (rest != 0) throw RangeError("curve index " + std::to_string(value) + " out of range");
  return idx;
}

std::uint64_t CurveIndex::to_integer() const {
  std::uint64_t v = 0;
  for (const auto& limb : limbs) {
    const std::uint64_t base = limb.prime().value();
    for (std::size_t j = limb.size(); j-- > 0;) {
      if (v > (std::numeric_limits<std::uint64_t>::max() - limb[j]) / base) {
        throw RangeError("curve index exceeds 64 bits");
      }
      v = v * base + limb[j];
    }
  }
  return v;
}

std::string CurveIndex::to_string() const {
  std::string s = "[";
  for (std::size_t l = 0; l < limbs.size(); ++l) {
    if (l) s += ',';
    try {
      s += std::to_string(digits_value(limbs[l]));
    } catch (const RangeError&) {
      s += limbs[l].to_string();
    }
  }
  return s + "]";
}

std::string CellWord::to_string() const {
  std::string s = "[";
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    if (l) s += ',';
    s += coeffs[l].to_string();
  }
  return s + "]";
}

// ---------------------------------------------------------------------------

DigitVec entry_point(const DigitVec& limb) {
  if (limb.prime().is_two()) throw ContractViolation("entry_point is defined for odd p");
  unsigned parity = 0;
  for (std::size_t j = 0; j < limb.size(); ++j) parity ^= limb[j] & 1u;
  DigitVec e(limb.size(), limb.prime());
  const unsigned top = limb.prime().max_digit();
  for (std::size_t a = 0; a < limb.size(); ++a) {
    if ((parity ^ (limb[a] & 1u)) != 0) e.set(a, top);
  }
  return e;
}

DigitVec entry_point(std::uint64_t i, std::size_t n, Prime p) {
  return entry_point(bin_digits(i, n, p));
}

DigitVec entry_point_p2(const DigitVec& limb) {
  if (!limb.prime().is_two()) throw ContractViolation("entry_point_p2 requires p = 2");
  if (limb.is_zero()) return limb;
  DigitVec j = limb;
  if (j[0] == 1) {
    j.set(0, 0);
  } else {
    decrement(j);
    decrement(j);
  }
  return gray_encode(j);
}

std::size_t direction_p2(const DigitVec& limb) {
  if (!limb.prime().is_two()) throw ContractViolation("direction_p2 requires p = 2");
  if (limb.is_zero()) return 0;
  const std::size_t n = limb.size();
  // For even i, the trailing ones of i-1 are the trailing zeros of i.
  const std::size_t t = limb[0] == 1 ? trailing_count(limb, 1) : trailing_count(limb, 0);
  return t % n;
}

// ---------------------------------------------------------------------------

Curve::Curve(CurveParams params) : params_(std::move(params)) { params_.validate(); }

CurveState Curve::initial_state() const {
  const std::size_t n = params_.n;
  return CurveState{DigitVec(n, params_.p), n - 1, Permutation::identity(n)};
}

Permutation Curve::local_order(const DigitVec& local_entry,
                               std::optional<std::size_t> direction) const {
  const std::size_t n = params_.n;
  switch (params_.variant) {
    case Variant::bubble:
      return direction ? bubble_perm(n, *direction) : Permutation::identity(n);
    case Variant::ring:
      return direction ? ring_perm(n, *direction) : Permutation::identity(n);
    case Variant::custom:
      break;
  }
  Permutation perm = params_.custom_order(LocalPiece{n, local_entry, direction});
  if (perm.size() != n) throw ContractViolation("custom order has the wrong size");
  if (direction && perm(n - 1) != *direction) {
    throw ContractViolation("custom order must map n-1 to the sub-cube direction");
  }
  return perm;
}

CurveState Curve::step(const CurveState& state, const DigitVec& limb) const {
  if (limb.size() != params_.n || limb.prime() != params_.p) {
    throw ContractViolation("limb does not match the curve parameters");
  }
  if (params_.p.is_two()) {
    const std::size_t t = direction_p2(limb);
    const TransformP2 parent(state.entry, state.order);
    DigitVec entry = parent.apply_inverse(entry_point_p2(limb));
    Permutation order = state.order.compose(local_order(entry_point_p2(limb), t));
    const std::size_t direction = state.order(t);
    return CurveState{std::move(entry), direction, std::move(order)};
  }
  const DigitVec local_entry = entry_point(limb);
  const TransformOdd parent(state.entry, state.order);
  DigitVec entry = parent.apply_inverse(local_entry);
  Permutation order = local_order(local_entry, std::nullopt).compose(state.order);
  return CurveState{std::move(entry), 0, std::move(order)};
}

DigitVec Curve::cell_digit(const CurveState& state, const DigitVec& limb) const {
  if (params_.p.is_two()) return transformed_gray(TransformP2(state.entry, state.order), limb);
  return transformed_gray(TransformOdd(state.entry, state.order), limb);
}

DigitVec Curve::limb_of(const CurveState& state, const DigitVec& coeff) const {
  if (params_.p.is_two()) {
    return transformed_gray_inverse(TransformP2(state.entry, state.order), coeff);
  }
  return transformed_gray_inverse(TransformOdd(state.entry, state.order), coeff);
}

CellWord Curve::index_to_cell(const CurveIndex& index) const {
  if (index.limbs.size() != params_.k) throw ContractViolation("index depth differs from k");
  CellWord word;
  word.coeffs.reserve(params_.k);
  CurveState state = initial_state();
  for (const auto& limb : index.limbs) {
    word.coeffs.push_back(cell_digit(state, limb));
    state = step(state, limb);
  }
  return word;
}

CurveIndex Curve::cell_to_index(const CellWord& word) const {
  if (word.coeffs.size() != params_.k) throw ContractViolation("cell word depth differs from k");
  CurveIndex index;
  index.limbs.reserve(params_.k);
  CurveState state = initial_state();
  for (const auto& coeff : word.coeffs) {
    DigitVec limb = limb_of(state, coeff);
    state = step(state, limb);
    index.limbs.push_back(std::move(limb));
  }
  return index;
}

std::vector<double> Curve::coord(const CellWord& word) const {
  std::vector<double> x(params_.n, 0.0);
  const double inv_p = 1.0 / params_.p.value();
  double scale = inv_p;
  const std::size_t n = params_.n;
  for (const auto& coeff : word.coeffs) {
    for (std::size_t j = 0; j < n; ++j) x[n - 1 - j] += coeff[j] * scale;
    scale *= inv_p;
  }
  return x;
}

std::vector<std::uint8_t> axis_digits(double x, Prime p, std::size_t depth) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw RangeError("coordinate " + std::to_string(x) + " outside [0, 1]");
  }
  const unsigned base = p.value();
  std::vector<std::uint8_t> out(depth, 0);
  if (x == 1.0) {
    std::fill(out.begin(), out.end(), p.max_digit());
    return out;
  }
  // Exact integer extraction while p^depth stays well inside the mantissa
  // of long double; otherwise peel digits off one level at a time.
  long double scale = 1.0L;
  bool exact = true;
  for (std::size_t l = 0; l < depth; ++l) {
    scale *= base;
    if (scale > 0x1p62L) {
      exact = false;
      break;
    }
  }
  if (exact) {
    auto q = static_cast<std::uint64_t>(std::floor(static_cast<long double>(x) * scale));
    const auto limit = static_cast<std::uint64_t>(scale) - 1;
    if (q > limit) q = limit;
    for (std::size_t l = depth; l-- > 0;) {
      out[l] = static_cast<std::uint8_t>(q % base);
      q /= base;
    }
    return out;
  }
  long double frac = x;
  for (std::size_t l = 0; l < depth; ++l) {
    frac *= base;
    long double digit = std::floor(frac);
    if (digit > base - 1) digit = base - 1;
    out[l] = static_cast<std::uint8_t>(digit);
    frac -= digit;
  }
  return out;
}

CellWord Curve::quantize(std::span<const double> x) const {
  if (x.size() != params_.n) throw ContractViolation("point dimension differs from n");
  CellWord word;
  word.coeffs.assign(params_.k, DigitVec(params_.n, params_.p));
  const std::size_t n = params_.n;
  for (std::size_t j = 0; j < n; ++j) {
    const auto digits = axis_digits(x[n - 1 - j], params_.p, params_.k);
    for (std::size_t l = 0; l < params_.k; ++l) word.coeffs[l].set(j, digits[l]);
  }
  return word;
}

std::vector<std::uint64_t> Curve::cell_coordinates(const CellWord& word) const {
  checked_power(params_.p.value(), params_.k);
  const std::size_t n = params_.n;
  std::vector<std::uint64_t> c(n, 0);
  for (const auto& coeff : word.coeffs) {
    for (std::size_t j = 0; j < n; ++j) c[n - 1 - j] = c[n - 1 - j] * params_.p.value() + coeff[j];
  }
  return c;
}

// ---------------------------------------------------------------------------

CurveState step_state_p2(const CurveState& state, const DigitVec& limb, Variant variant) {
  if (variant == Variant::custom) throw ContractViolation("custom variant needs a Curve");
  CurveParams params{limb.prime(), limb.size(), 1, variant, {}};
  return Curve(params).step(state, limb);
}

CurveState step_state_odd(const CurveState& state, const DigitVec& limb) {
  CurveParams params{limb.prime(), limb.size(), 1, Variant::bubble, {}};
  return Curve(params).step(state, limb);
}

double padic_distance(const CellWord& a, const CellWord& b) {
  if (a.coeffs.size() != b.coeffs.size()) throw ContractViolation("cell words differ in depth");
  for (std::size_t l = 0; l < a.coeffs.size(); ++l) {
    if (a.coeffs[l] != b.coeffs[l]) {
      return std::pow(static_cast<double>(a.coeffs[l].prime().value()), -static_cast<double>(l));
    }
  }
  return 0.0;
}

}  // namespace grayhilbert
