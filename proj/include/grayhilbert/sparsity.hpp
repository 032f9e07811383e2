#pragma once

// Storage-capacity measures comparing the scaled tree to the static tree.
//
//   omega  = overfilled leaves / non-empty leaves
//   Omega  = (1 + omega) * |L|
//   R_p    = Omega(scaled) / Omega(static)
//   rho_p  = (-log_p(R_p / s) - n eps_p) / log_p(2s)
//
// All static quantities stay in log space: the static tree has p^(nk)
// leaves, far beyond double range for n in the hundreds.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "grayhilbert/affine.hpp"
#include "grayhilbert/digits.hpp"
#include "grayhilbert/index.hpp"

namespace grayhilbert {

/// ContractViolation if nonempty == 0 or overfilled > nonempty.
double omega(std::size_t nonempty, std::size_t overfilled);
double capacity(double leaves, double omega);
/// log_p(Omega) from log_p(|L|).
double log_capacity(double log_p_leaves, double omega, Prime p);

struct StaticParams {
  std::size_t k;
  double eps;  // k - log_p(|S|/s)/n, in [0, 1)
};

/// Smallest k >= 1 with s * p^(nk) >= |S|. ContractViolation if s >= |S|.
StaticParams static_params(std::size_t size, std::size_t bucket, std::size_t n, Prime p);

struct SparsityReport {
  std::string label;
  unsigned p = 2;
  std::size_t n = 0;
  std::size_t points = 0;
  std::size_t bucket = 0;
  Variant variant = Variant::bubble;
  std::size_t k_static = 0;
  double eps = 0.0;
  double omega_static = 0.0;
  double omega_scaled = 0.0;
  std::size_t leaves_scaled = 0;
  double log_p_leaves_static = 0.0;
  double log_p_ratio = 0.0;
  double rho = 0.0;
  double rho_raw = 0.0;       // before clamping
  bool rho_in_range = true;   // raw value within 1e-9 of [0, 1]
  bool bounds_hold = true;    // 1/2 p^(-n eps) <= R_p <= s p^(-n eps)
  bool criterion_applies = false;  // eps >= log_p(s)/n
  bool ratio_at_most_one = false;  // R_p <= 1

  double log2_ratio() const;
};

/// log_p Omega(scaled) - log_p Omega(static).
double capacity_ratio_log(const TreeStats& scaled, const StaticStats& stat, Prime p);
/// rho from the capacity measures (includes 1 + omega_scaled).
double rho(const TreeStats& scaled, const StaticStats& stat, std::size_t bucket, Prime p,
           std::size_t n);

SparsityReport make_report(std::string label, const TreeParams& params, const TreeStats& scaled,
                           const StaticStats& stat);

/// One row per (variant, s), variants outermost. Paths are computed once per
/// variant and shared by every s. `base.bucket` is ignored.
std::vector<SparsityReport> sparsity_sweep(const std::string& label,
                                           std::span<const std::vector<double>> points,
                                           const TreeParams& base, std::span<const std::size_t> buckets,
                                           std::span<const Variant> variants, unsigned threads = 0);

/// Rounds to two decimals for tables.
std::string format_2dp(double v);

}  // namespace grayhilbert
