#pragma once

// The scaled Gray-Hilbert tree and its static counterpart.
//
// The tree has one digit per edge: level lambda*n + j of the tree refines
// iteration lambda of the curve by one more base-p digit of that iteration's
// limb, most significant first. A point's path is therefore the digit
// sequence of cell_to_index(quantize(x)) at depth k_max. Descending the tree
// only needs one coordinate digit per level, which is what PathCursor
// computes from the curve state of the current sub-cube.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "grayhilbert/curve.hpp"

namespace grayhilbert {

using PointId = std::uint64_t;
using Path = std::vector<std::uint8_t>;

struct TreeParams {
  Prime p{2};
  std::size_t n = 2;
  std::size_t bucket = 1;  // s
  std::size_t k_max = 20;
  Variant variant = Variant::bubble;
  LocalOrderFn custom_order;

  void validate() const;
  std::size_t max_levels() const noexcept { return k_max * n; }
  CurveParams curve_params() const;
};

/// Produces the tree digits of one quantized point, one level at a time.
/// Applies the same state transition as Curve::step, in place, for the
/// built-in variants; custom orders go through Curve::step.
class PathCursor {
 public:
  PathCursor(const Curve& curve, CellWord cell);

  std::size_t level() const noexcept { return level_; }
  bool done() const noexcept { return level_ == curve_->depth() * curve_->dim(); }
  /// The digit selecting the child at the current level; advances a level.
  unsigned next();

 private:
  void begin_iteration();
  void finish_iteration();

  const Curve* curve_;
  CellWord cell_;
  CurveState state_;
  DigitVec limb_;
  std::vector<std::uint8_t> entry_;
  std::vector<std::size_t> order_;      // sigma, or tau for odd p
  std::vector<std::size_t> order_inv_;  // tau^-1 (odd p)
  std::vector<std::uint8_t> scratch_;
  std::size_t level_ = 0;
  bool flag_ = false;
};

/// Full-depth path of x (k_max iterations). RangeError outside [0, 1]^n.
Path point_path(const Curve& curve, std::span<const double> x);
/// The same digits read off cell_to_index: limb lambda, most significant
/// digit first.
Path index_path(const CurveIndex& index);

/// Paths of many points, computed on up to `threads` workers (0 = hardware).
std::vector<Path> point_paths(const Curve& curve, std::span<const std::vector<double>> points,
                              unsigned threads = 0);

struct LeafInfo {
  std::size_t depth;
  Path prefix;                 // digits from the root to the leaf
  std::vector<PointId> ids;    // sorted
};

struct TreeStats {
  std::size_t points = 0;
  std::size_t nodes = 0;
  std::size_t leaves = 0;        // non-empty leaves (an empty tree has none)
  std::size_t overfilled = 0;    // leaves holding more than s points
  std::size_t max_depth = 0;
  std::map<std::size_t, std::size_t> depth_histogram;  // leaf depth -> count
};

class ScaledTree {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;

  explicit ScaledTree(TreeParams params);

  /// Bulk load with ids 0..|points|-1; same result as inserting one by one.
  static ScaledTree build(TreeParams params, std::span<const std::vector<double>> points,
                          unsigned threads = 0);
  /// Bulk load from precomputed paths.
  static ScaledTree build_from_paths(TreeParams params, std::vector<Path> paths);

  const TreeParams& params() const noexcept { return params_; }
  const Curve& curve() const noexcept { return curve_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool contains(PointId id) const { return points_.contains(id); }

  /// ContractViolation if the id is already present.
  void insert(PointId id, std::span<const double> x);
  void insert_path(PointId id, Path path);
  /// NotFoundError if absent.
  void remove(PointId id);

  /// The leaf whose cell contains x, or nullopt if x falls in a region no
  /// point occupies. The digits walked are returned through `digits`.
  std::optional<NodeId> find_node(std::span<const double> x, Path* digits = nullptr) const;

  bool is_leaf(NodeId id) const { return nodes_.at(id).leaf; }
  std::size_t depth(NodeId id) const { return nodes_.at(id).depth; }
  const std::vector<PointId>& bucket(NodeId id) const { return nodes_.at(id).bucket; }

  /// Non-empty leaves in curve order.
  std::vector<LeafInfo> leaves() const;
  TreeStats stats() const;
  /// Checks every structural invariant; throws Error describing the first
  /// violation.
  void check_invariants() const;

  friend bool structurally_equal(const ScaledTree& a, const ScaledTree& b);

 private:
  struct Node {
    NodeId parent = kRoot;
    std::uint32_t depth = 0;
    std::uint8_t digit = 0;
    bool leaf = true;
    std::size_t count = 0;                                // points below
    std::vector<std::pair<std::uint8_t, NodeId>> children;  // sorted by digit
    std::vector<PointId> bucket;
  };

  NodeId new_node(NodeId parent, std::uint8_t digit);
  void free_subtree(NodeId id, std::vector<PointId>& collected);
  std::optional<NodeId> child(NodeId id, std::uint8_t digit) const;
  NodeId child_or_create(NodeId id, std::uint8_t digit);
  void split(NodeId id);
  NodeId build_range(NodeId parent, std::uint8_t digit, std::size_t depth,
                     std::span<const PointId> ids);

  TreeParams params_;
  Curve curve_;
  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  std::unordered_map<PointId, Path> points_;
};

/// Counts the leaves of the scaled tree over `sorted` paths (sorted
/// lexicographically) without materialising nodes.
TreeStats scaled_stats(std::span<const Path* const> sorted, std::size_t bucket,
                       std::size_t max_levels);

/// Algorithm-1 style partition of S into resolution classes with a total
/// order. A point's class is the smallest iteration depth at which no other
/// point shares its cell; exact duplicates get k_max.
class ScaledPartition {
 public:
  explicit ScaledPartition(TreeParams params);
  static ScaledPartition build(TreeParams params, std::span<const std::vector<double>> points);

  void insert(PointId id, std::span<const double> x);
  void insert_path(PointId id, Path path);

  /// Point ids in curve order (ties between duplicates broken by id).
  std::vector<PointId> order() const;
  /// class depth k -> ids with that resolution, each sorted by id.
  std::map<std::size_t, std::vector<PointId>> classes() const;
  std::size_t resolution(PointId id) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  struct Entry {
    Path path;
    PointId id;
    friend auto operator<=>(const Entry&, const Entry&) = default;
  };
  std::size_t resolution_of(std::set<Entry>::const_iterator it) const;

  TreeParams params_;
  Curve curve_;
  std::set<Entry> entries_;
  std::unordered_map<PointId, std::set<Entry>::const_iterator> by_id_;
};

struct StaticStats {
  std::size_t k = 0;
  double eps = 0.0;
  std::size_t points = 0;
  std::size_t nonempty = 0;
  std::size_t overfilled = 0;
  std::size_t largest_group = 0;
  double log_p_leaves = 0.0;  // n * k; the leaves are never materialised
};

/// The static tree at iteration k = ceil(log_p(|S|/s)/n): points grouped by
/// their depth-k cell. ContractViolation if s >= |S|.
StaticStats build_static(std::span<const Path* const> paths, std::size_t bucket, std::size_t n,
                         Prime p);
StaticStats build_static(const TreeParams& params, std::span<const std::vector<double>> points,
                         unsigned threads = 0);

}  // namespace grayhilbert
