#include "grayhilbert/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "grayhilbert/errors.hpp"

namespace grayhilbert {

namespace {

constexpr double kRhoSlack = 1e-9;
constexpr double kBoundSlack = 1e-9;

double log_base(double x, Prime p) { return std::log(x) / std::log(static_cast<double>(p.value())); }

}  // namespace

double omega(std::size_t nonempty, std::size_t overfilled) {
  if (nonempty == 0) throw ContractViolation("omega needs at least one non-empty leaf");
  if (overfilled > nonempty) throw ContractViolation("more overfilled than non-empty leaves");
  return static_cast<double>(overfilled) / static_cast<double>(nonempty);
}

double capacity(double leaves, double omega) { return (1.0 + omega) * leaves; }

double log_capacity(double log_p_leaves, double omega, Prime p) {
  return log_base(1.0 + omega, p) + log_p_leaves;
}

StaticParams static_params(std::size_t size, std::size_t bucket, std::size_t n, Prime p) {
  if (bucket == 0) throw ContractViolation("bucket capacity must be at least 1");
  if (n == 0) throw ContractViolation("dimension must be at least 1");
  if (bucket >= size) {
    throw ContractViolation("static tree needs s < |S| (s = " + std::to_string(bucket) +
                            ", |S| = " + std::to_string(size) + ")");
  }
  // Compare s * p^(nk) with |S| exactly, saturating once it exceeds |S|.
  const auto compare = [&](std::size_t k) {
    long double cap = static_cast<long double>(bucket);
    for (std::size_t j = 0; j < n * k; ++j) {
      cap *= p.value();
      if (cap > static_cast<long double>(size)) return 1;
    }
    return cap == static_cast<long double>(size) ? 0 : -1;
  };
  std::size_t k = 1;
  while (compare(k) < 0) ++k;
  const bool exact = compare(k) == 0;
  const double frac = log_base(static_cast<double>(size) / static_cast<double>(bucket), p) /
                      static_cast<double>(n);
  double eps = exact ? 0.0 : static_cast<double>(k) - frac;
  if (eps < 0.0) eps = 0.0;
  return {k, eps};
}

double SparsityReport::log2_ratio() const { return log_p_ratio * std::log2(static_cast<double>(p)); }

double capacity_ratio_log(const TreeStats& scaled, const StaticStats& stat, Prime p) {
  const double w_sc = omega(scaled.leaves, scaled.overfilled);
  const double w_st = omega(stat.nonempty, stat.overfilled);
  return log_capacity(log_base(static_cast<double>(scaled.leaves), p), w_sc, p) -
         log_capacity(stat.log_p_leaves, w_st, p);
}

double rho(const TreeStats& scaled, const StaticStats& stat, std::size_t bucket, Prime p,
           std::size_t n) {
  const double log_r = capacity_ratio_log(scaled, stat, p);
  const double log_s = log_base(static_cast<double>(bucket), p);
  return (log_s - log_r - static_cast<double>(n) * stat.eps) /
         log_base(2.0 * static_cast<double>(bucket), p);
}

SparsityReport make_report(std::string label, const TreeParams& params, const TreeStats& scaled,
                           const StaticStats& stat) {
  SparsityReport r;
  r.label = std::move(label);
  r.p = params.p.value();
  r.n = params.n;
  r.points = scaled.points;
  r.bucket = params.bucket;
  r.variant = params.variant;
  r.k_static = stat.k;
  r.eps = stat.eps;
  r.omega_static = omega(stat.nonempty, stat.overfilled);
  r.omega_scaled = omega(scaled.leaves, scaled.overfilled);
  r.leaves_scaled = scaled.leaves;
  r.log_p_leaves_static = stat.log_p_leaves;
  r.log_p_ratio = capacity_ratio_log(scaled, stat, params.p);
  r.rho_raw = rho(scaled, stat, params.bucket, params.p, params.n);
  r.rho = r.rho_raw;
  if (r.rho < 0.0 && r.rho > -kRhoSlack) r.rho = 0.0;
  if (r.rho > 1.0 && r.rho < 1.0 + kRhoSlack) r.rho = 1.0;
  r.rho_in_range = r.rho >= 0.0 && r.rho <= 1.0;

  const double n_eps = static_cast<double>(params.n) * stat.eps;
  const double lower = -log_base(2.0, params.p) - n_eps;
  const double upper = log_base(static_cast<double>(params.bucket), params.p) - n_eps;
  r.bounds_hold = r.log_p_ratio >= lower - kBoundSlack && r.log_p_ratio <= upper + kBoundSlack;
  r.criterion_applies =
      stat.eps >= log_base(static_cast<double>(params.bucket), params.p) / params.n - kBoundSlack;
  r.ratio_at_most_one = r.log_p_ratio <= kBoundSlack;
  return r;
}

std::vector<SparsityReport> sparsity_sweep(const std::string& label,
                                           std::span<const std::vector<double>> points,
                                           const TreeParams& base, std::span<const std::size_t> buckets,
                                           std::span<const Variant> variants, unsigned threads) {
  std::vector<SparsityReport> rows;
  for (Variant v : variants) {
    TreeParams prm = base;
    prm.variant = v;
    prm.bucket = 1;
    prm.validate();
    const Curve curve(prm.curve_params());
    const auto paths = point_paths(curve, points, threads);
    std::vector<const Path*> sorted;
    sorted.reserve(paths.size());
    for (const auto& path : paths) sorted.push_back(&path);
    std::sort(sorted.begin(), sorted.end(), [](const Path* a, const Path* b) { return *a < *b; });
    for (std::size_t s : buckets) {
      prm.bucket = s;
      prm.validate();
      const auto scaled = scaled_stats(sorted, s, prm.max_levels());
      const auto stat = build_static(sorted, s, prm.n, prm.p);
      rows.push_back(make_report(label, prm, scaled, stat));
    }
  }
  return rows;
}

std::string format_2dp(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace grayhilbert
