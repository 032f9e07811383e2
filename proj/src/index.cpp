#include "grayhilbert/index.hpp"

#include <algorithm>
#include <cstring>
#include <exception>
#include <functional>
#include <thread>

#include "grayhilbert/errors.hpp"
#include "grayhilbert/sparsity.hpp"

namespace grayhilbert {

void TreeParams::validate() const {
  if (bucket == 0) throw ContractViolation("bucket capacity s must be at least 1");
  if (k_max == 0) throw ContractViolation("k_max must be at least 1");
  curve_params().validate();
}

CurveParams TreeParams::curve_params() const { return CurveParams{p, n, k_max, variant, custom_order}; }

// ---------------------------------------------------------------------------

PathCursor::PathCursor(const Curve& curve, CellWord cell)
    : curve_(&curve),
      cell_(std::move(cell)),
      state_(curve.initial_state()),
      limb_(curve.dim(), curve.prime()) {
  if (cell_.coeffs.size() != curve.depth()) throw ContractViolation("cell depth differs from k");
  const std::size_t n = curve.dim();
  entry_.assign(n, 0);
  order_ = state_.order.image();
  order_inv_.resize(n);
  scratch_.resize(n + 1);
}

void PathCursor::begin_iteration() {
  flag_ = false;
  if (!curve_->prime().is_two()) {
    for (std::size_t i = 0; i < order_.size(); ++i) order_inv_[order_[i]] = i;
  }
}

void PathCursor::finish_iteration() {
  const std::size_t n = curve_->dim();
  const unsigned top = curve_->prime().max_digit();
  const auto variant = curve_->params().variant;
  if (variant == Variant::custom) {
    state_ = curve_->step(state_, limb_);
    entry_.assign(state_.entry.digits().begin(), state_.entry.digits().end());
    order_ = state_.order.image();
    return;
  }
  if (curve_->prime().is_two()) {
    // Local entry gc(2 floor((w-1)/2)), local direction t; see entry_point_p2
    // and direction_p2.
    const std::size_t t = direction_p2(limb_);
    auto& j = scratch_;
    for (std::size_t m = 0; m < n; ++m) j[m] = limb_[m];
    j[n] = 0;
    if (!limb_.is_zero()) {
      if (j[0] == 1) {
        j[0] = 0;
      } else {
        // subtract 2 from an even, nonzero number
        std::size_t m = 1;
        while (j[m] == 0) j[m++] = 1;
        j[m] = 0;
      }
    }
    for (std::size_t m = 0; m < n; ++m) entry_[order_[m]] ^= j[m] ^ j[m + 1];
    if (variant == Variant::bubble) {
      std::rotate(order_.begin() + static_cast<std::ptrdiff_t>(t),
                  order_.begin() + static_cast<std::ptrdiff_t>(t) + 1, order_.end());
    } else {
      std::rotate(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>((t + 1) % n), order_.end());
    }
    return;
  }
  // Odd p: local entry eps_a = (p-1) * parity of the other digits, pulled
  // back through the parent transform; the local order is the identity.
  unsigned parity = 0;
  for (std::size_t m = 0; m < n; ++m) parity ^= limb_[m] & 1u;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = order_[i];
    const unsigned local = (parity ^ (limb_[a] & 1u)) ? top : 0;
    entry_[i] = static_cast<std::uint8_t>(entry_[i] == 0 ? local : top - local);
  }
}

unsigned PathCursor::next() {
  if (done()) throw RangeError("path cursor is past the last level");
  const std::size_t n = curve_->dim();
  const std::size_t lambda = level_ / n;
  const std::size_t j = level_ % n;
  const std::size_t m = n - 1 - j;
  const unsigned top = curve_->prime().max_digit();
  if (j == 0) begin_iteration();

  // Gray digit m of T(c): axis sigma(m) for p = 2, tau^-1(m) for odd p.
  unsigned g;
  if (curve_->prime().is_two()) {
    const std::size_t axis = order_[m];
    g = cell_.coeffs[lambda][axis] ^ entry_[axis];
  } else {
    const std::size_t axis = order_inv_[m];
    const unsigned c = cell_.coeffs[lambda][axis];
    g = entry_[axis] == 0 ? c : top - c;
  }
  const unsigned x = flag_ ? top - g : g;
  if (g & 1u) flag_ = !flag_;
  limb_.set(m, x);
  ++level_;
  if (j + 1 == n && !done()) finish_iteration();
  return x;
}

Path point_path(const Curve& curve, std::span<const double> x) {
  PathCursor cursor(curve, curve.quantize(x));
  Path path;
  path.reserve(curve.depth() * curve.dim());
  while (!cursor.done()) path.push_back(static_cast<std::uint8_t>(cursor.next()));
  return path;
}

Path index_path(const CurveIndex& index) {
  Path path;
  for (const auto& limb : index.limbs) {
    for (std::size_t m = limb.size(); m-- > 0;) path.push_back(limb[m]);
  }
  return path;
}

std::vector<Path> point_paths(const Curve& curve, std::span<const std::vector<double>> points,
                              unsigned threads) {
  std::vector<Path> paths(points.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, (points.size() + 255) / 256));
  if (threads <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) paths[i] = point_path(curve, points[i]);
    return paths;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (points.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = t * chunk, hi = std::min(points.size(), lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) paths[i] = point_path(curve, points[i]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return paths;
}

// ---------------------------------------------------------------------------

ScaledTree::ScaledTree(TreeParams params)
    : params_((params.validate(), std::move(params))), curve_(params_.curve_params()) {
  nodes_.emplace_back();
}

ScaledTree::NodeId ScaledTree::new_node(NodeId parent, std::uint8_t digit) {
  Node node;
  node.parent = parent;
  node.depth = nodes_[parent].depth + 1;
  node.digit = digit;
  if (!free_.empty()) {
    const NodeId id = free_.back();
    free_.pop_back();
    nodes_[id] = std::move(node);
    return id;
  }
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

std::optional<ScaledTree::NodeId> ScaledTree::child(NodeId id, std::uint8_t digit) const {
  const auto& ch = nodes_[id].children;
  const auto it = std::lower_bound(ch.begin(), ch.end(), digit,
                                   [](const auto& c, std::uint8_t d) { return c.first < d; });
  if (it == ch.end() || it->first != digit) return std::nullopt;
  return it->second;
}

ScaledTree::NodeId ScaledTree::child_or_create(NodeId id, std::uint8_t digit) {
  if (auto c = child(id, digit)) return *c;
  const NodeId created = new_node(id, digit);
  auto& ch = nodes_[id].children;
  const auto it = std::lower_bound(ch.begin(), ch.end(), digit,
                                   [](const auto& c, std::uint8_t d) { return c.first < d; });
  ch.insert(it, {digit, created});
  return created;
}

void ScaledTree::split(NodeId id) {
  const std::size_t limit = params_.max_levels();
  std::vector<NodeId> pending{id};
  while (!pending.empty()) {
    const NodeId v = pending.back();
    pending.pop_back();
    if (nodes_[v].bucket.size() <= params_.bucket || nodes_[v].depth >= limit) continue;
    std::vector<PointId> moving = std::move(nodes_[v].bucket);
    nodes_[v].bucket.clear();
    nodes_[v].leaf = false;
    const std::size_t d = nodes_[v].depth;
    for (PointId pid : moving) {
      const NodeId c = child_or_create(v, points_.at(pid)[d]);
      nodes_[c].bucket.push_back(pid);
      ++nodes_[c].count;
    }
    for (const auto& [digit, c] : nodes_[v].children) pending.push_back(c);
  }
}

void ScaledTree::insert(PointId id, std::span<const double> x) {
  if (x.size() != params_.n) throw ContractViolation("point dimension differs from n");
  insert_path(id, point_path(curve_, x));
}

void ScaledTree::insert_path(PointId id, Path path) {
  if (path.size() != params_.max_levels()) throw ContractViolation("path length differs from k_max*n");
  if (points_.contains(id)) throw ContractViolation("point id " + std::to_string(id) + " already present");
  points_.emplace(id, std::move(path));
  const Path& p = points_.at(id);
  NodeId v = kRoot;
  ++nodes_[v].count;
  while (!nodes_[v].leaf) {
    v = child_or_create(v, p[nodes_[v].depth]);
    ++nodes_[v].count;
  }
  auto& b = nodes_[v].bucket;
  b.insert(std::upper_bound(b.begin(), b.end(), id), id);
  split(v);
}

void ScaledTree::free_subtree(NodeId id, std::vector<PointId>& collected) {
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    auto& node = nodes_[v];
    collected.insert(collected.end(), node.bucket.begin(), node.bucket.end());
    for (const auto& [digit, c] : node.children) stack.push_back(c);
    node = Node{};
    if (v != id) free_.push_back(v);
  }
}

void ScaledTree::remove(PointId id) {
  const auto it = points_.find(id);
  if (it == points_.end()) throw NotFoundError("point id " + std::to_string(id) + " not in the tree");
  const Path path = std::move(it->second);
  points_.erase(it);

  std::vector<NodeId> trail{kRoot};
  while (!nodes_[trail.back()].leaf) trail.push_back(*child(trail.back(), path[nodes_[trail.back()].depth]));
  for (NodeId v : trail) --nodes_[v].count;
  auto& b = nodes_[trail.back()].bucket;
  b.erase(std::find(b.begin(), b.end(), id));

  // The topmost node on the path that no longer needs to be split becomes a
  // leaf holding everything below it; if that is nothing, it is pruned.
  const auto top = std::find_if(trail.begin(), trail.end(),
                                [&](NodeId v) { return nodes_[v].count <= params_.bucket; });
  if (top == trail.end()) return;
  const NodeId u = *top;
  if (!nodes_[u].leaf) {
    const Node keep = nodes_[u];
    std::vector<PointId> collected;
    free_subtree(u, collected);
    std::sort(collected.begin(), collected.end());
    auto& node = nodes_[u];
    node.parent = keep.parent;
    node.depth = keep.depth;
    node.digit = keep.digit;
    node.count = keep.count;
    node.bucket = std::move(collected);
  }
  if (nodes_[u].count == 0 && u != kRoot) {
    auto& siblings = nodes_[nodes_[u].parent].children;
    siblings.erase(std::find_if(siblings.begin(), siblings.end(),
                                [&](const auto& c) { return c.second == u; }));
    nodes_[u] = Node{};
    free_.push_back(u);
  }
}

std::optional<ScaledTree::NodeId> ScaledTree::find_node(std::span<const double> x, Path* digits) const {
  if (x.size() != params_.n) throw ContractViolation("point dimension differs from n");
  PathCursor cursor(curve_, curve_.quantize(x));
  NodeId v = kRoot;
  while (!nodes_[v].leaf) {
    const auto d = static_cast<std::uint8_t>(cursor.next());
    if (digits) digits->push_back(d);
    const auto c = child(v, d);
    if (!c) return std::nullopt;
    v = *c;
  }
  return v;
}

ScaledTree ScaledTree::build(TreeParams params, std::span<const std::vector<double>> points,
                             unsigned threads) {
  params.validate();
  for (const auto& x : points) {
    if (x.size() != params.n) throw ContractViolation("point dimension differs from n");
  }
  const Curve curve(params.curve_params());
  return build_from_paths(std::move(params), point_paths(curve, points, threads));
}

ScaledTree ScaledTree::build_from_paths(TreeParams params, std::vector<Path> paths) {
  ScaledTree tree(std::move(params));
  std::vector<PointId> ids(paths.size());
  for (PointId i = 0; i < paths.size(); ++i) {
    if (paths[i].size() != tree.params_.max_levels()) {
      throw ContractViolation("path length differs from k_max*n");
    }
    ids[i] = i;
  }
  std::stable_sort(ids.begin(), ids.end(), [&](PointId a, PointId b) { return paths[a] < paths[b]; });
  for (PointId i = 0; i < paths.size(); ++i) tree.points_.emplace(i, std::move(paths[i]));
  if (ids.empty()) return tree;
  tree.nodes_[kRoot].count = ids.size();
  tree.build_range(kRoot, 0, 0, ids);
  return tree;
}

ScaledTree::NodeId ScaledTree::build_range(NodeId v, std::uint8_t, std::size_t depth,
                                           std::span<const PointId> ids) {
  auto& node = nodes_[v];
  node.count = ids.size();
  if (ids.size() <= params_.bucket || depth >= params_.max_levels()) {
    node.leaf = true;
    node.bucket.assign(ids.begin(), ids.end());
    std::sort(node.bucket.begin(), node.bucket.end());
    return v;
  }
  node.leaf = false;
  std::size_t lo = 0;
  while (lo < ids.size()) {
    const std::uint8_t digit = points_.at(ids[lo])[depth];
    std::size_t hi = lo + 1;
    while (hi < ids.size() && points_.at(ids[hi])[depth] == digit) ++hi;
    const NodeId c = child_or_create(v, digit);
    build_range(c, digit, depth + 1, ids.subspan(lo, hi - lo));
    lo = hi;
  }
  return v;
}

std::vector<LeafInfo> ScaledTree::leaves() const {
  std::vector<LeafInfo> out;
  Path prefix;
  std::function<void(NodeId)> walk = [&](NodeId v) {
    const auto& node = nodes_[v];
    if (node.leaf) {
      if (!node.bucket.empty()) out.push_back({node.depth, prefix, node.bucket});
      return;
    }
    for (const auto& [digit, c] : node.children) {
      prefix.push_back(digit);
      walk(c);
      prefix.pop_back();
    }
  };
  walk(kRoot);
  return out;
}

TreeStats ScaledTree::stats() const {
  TreeStats s;
  s.points = points_.size();
  std::vector<NodeId> stack{kRoot};
  while (!stack.empty()) {
    const auto& node = nodes_[stack.back()];
    stack.pop_back();
    ++s.nodes;
    if (node.leaf) {
      if (node.bucket.empty()) continue;
      ++s.leaves;
      if (node.bucket.size() > params_.bucket) ++s.overfilled;
      s.max_depth = std::max<std::size_t>(s.max_depth, node.depth);
      ++s.depth_histogram[node.depth];
    }
    for (const auto& [digit, c] : node.children) stack.push_back(c);
  }
  return s;
}

void ScaledTree::check_invariants() const {
  std::size_t seen = 0;
  std::vector<NodeId> stack{kRoot};
  const auto fail = [](const std::string& what) { throw Error("tree invariant violated: " + what); };
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const auto& node = nodes_[v];
    if (node.leaf) {
      if (!node.children.empty()) fail("leaf with children");
      if (node.count != node.bucket.size()) fail("leaf count mismatch");
      if (node.bucket.empty() && v != kRoot) fail("empty non-root leaf");
      if (node.bucket.size() > params_.bucket && node.depth < params_.max_levels()) {
        fail("overfilled leaf above the maximal level");
      }
      if (v != kRoot && nodes_[node.parent].count <= params_.bucket) fail("unnecessary split");
      for (PointId id : node.bucket) {
        const auto it = points_.find(id);
        if (it == points_.end()) fail("unknown id in bucket");
        // the leaf must lie on the point's path
        NodeId u = v;
        while (u != kRoot) {
          if (it->second[nodes_[u].depth - 1] != nodes_[u].digit) fail("point stored off its path");
          u = nodes_[u].parent;
        }
      }
      seen += node.bucket.size();
      continue;
    }
    if (node.children.empty()) fail("internal node without children");
    if (node.count <= params_.bucket) fail("internal node that fits in a bucket");
    std::size_t below = 0;
    for (const auto& [digit, c] : node.children) {
      if (nodes_[c].parent != v || nodes_[c].digit != digit || nodes_[c].depth != node.depth + 1) {
        fail("broken parent link");
      }
      below += nodes_[c].count;
      stack.push_back(c);
    }
    if (below != node.count) fail("internal count mismatch");
  }
  if (seen != points_.size()) fail("points missing from leaves");
}

bool structurally_equal(const ScaledTree& a, const ScaledTree& b) {
  if (a.params_.bucket != b.params_.bucket || a.params_.max_levels() != b.params_.max_levels()) {
    return false;
  }
  std::vector<std::pair<ScaledTree::NodeId, ScaledTree::NodeId>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [u, v] = stack.back();
    stack.pop_back();
    const auto& x = a.nodes_[u];
    const auto& y = b.nodes_[v];
    if (x.leaf != y.leaf || x.depth != y.depth || x.count != y.count) return false;
    if (x.children.size() != y.children.size()) return false;
    auto bx = x.bucket, by = y.bucket;
    std::sort(bx.begin(), bx.end());
    std::sort(by.begin(), by.end());
    if (bx != by) return false;
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      if (x.children[i].first != y.children[i].first) return false;
      stack.emplace_back(x.children[i].second, y.children[i].second);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

TreeStats scaled_stats(std::span<const Path* const> sorted, std::size_t bucket,
                       std::size_t max_levels) {
  TreeStats s;
  s.points = sorted.size();
  if (sorted.empty()) {
    s.nodes = 1;
    return s;
  }
  struct Range {
    std::size_t lo, hi, depth;
  };
  std::vector<Range> stack{{0, sorted.size(), 0}};
  while (!stack.empty()) {
    const Range r = stack.back();
    stack.pop_back();
    ++s.nodes;
    const std::size_t size = r.hi - r.lo;
    if (size <= bucket || r.depth >= max_levels) {
      ++s.leaves;
      if (size > bucket) ++s.overfilled;
      s.max_depth = std::max(s.max_depth, r.depth);
      ++s.depth_histogram[r.depth];
      continue;
    }
    std::size_t lo = r.lo;
    while (lo < r.hi) {
      const auto digit = (*sorted[lo])[r.depth];
      std::size_t hi = lo + 1;
      while (hi < r.hi && (*sorted[hi])[r.depth] == digit) ++hi;
      stack.push_back({lo, hi, r.depth + 1});
      lo = hi;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

ScaledPartition::ScaledPartition(TreeParams params)
    : params_((params.validate(), std::move(params))), curve_(params_.curve_params()) {}

ScaledPartition ScaledPartition::build(TreeParams params, std::span<const std::vector<double>> points) {
  ScaledPartition part(std::move(params));
  for (std::size_t i = 0; i < points.size(); ++i) part.insert(i, points[i]);
  return part;
}

void ScaledPartition::insert(PointId id, std::span<const double> x) {
  if (x.size() != params_.n) throw ContractViolation("point dimension differs from n");
  insert_path(id, point_path(curve_, x));
}

void ScaledPartition::insert_path(PointId id, Path path) {
  if (by_id_.contains(id)) throw ContractViolation("point id " + std::to_string(id) + " already present");
  const auto [it, inserted] = entries_.insert(Entry{std::move(path), id});
  by_id_.emplace(id, it);
}

std::size_t ScaledPartition::resolution_of(std::set<Entry>::const_iterator it) const {
  const auto lcp = [](const Path& a, const Path& b) {
    return static_cast<std::size_t>(std::mismatch(a.begin(), a.end(), b.begin(), b.end()).first - a.begin());
  };
  std::size_t shared = 0;
  if (it != entries_.begin()) shared = std::max(shared, lcp(std::prev(it)->path, it->path));
  if (std::next(it) != entries_.end()) shared = std::max(shared, lcp(std::next(it)->path, it->path));
  if (shared >= params_.max_levels()) return params_.k_max;
  return shared / params_.n + 1;
}

std::size_t ScaledPartition::resolution(PointId id) const {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw NotFoundError("point id " + std::to_string(id) + " not in the partition");
  return resolution_of(it->second);
}

std::vector<PointId> ScaledPartition::order() const {
  std::vector<PointId> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.id);
  return out;
}

std::map<std::size_t, std::vector<PointId>> ScaledPartition::classes() const {
  std::map<std::size_t, std::vector<PointId>> out;
  for (auto it = entries_.begin(); it != entries_.end(); ++it) out[resolution_of(it)].push_back(it->id);
  for (auto& [k, ids] : out) std::sort(ids.begin(), ids.end());
  return out;
}

// ---------------------------------------------------------------------------

StaticStats build_static(std::span<const Path* const> paths, std::size_t bucket, std::size_t n,
                         Prime p) {
  const auto sp = static_params(paths.size(), bucket, n, p);
  const std::size_t prefix = n * sp.k;
  for (const Path* path : paths) {
    if (path->size() < prefix) {
      throw RangeError("static depth k = " + std::to_string(sp.k) + " exceeds the path depth");
    }
  }
  const auto before = [&](const Path* a, const Path* b) {
    return std::memcmp(a->data(), b->data(), prefix) < 0;
  };
  std::vector<const Path*> sorted(paths.begin(), paths.end());
  // Callers sweeping s usually pass the same lexicographically sorted paths.
  if (!std::is_sorted(sorted.begin(), sorted.end(), before)) std::sort(sorted.begin(), sorted.end(), before);
  StaticStats st;
  st.k = sp.k;
  st.eps = sp.eps;
  st.points = paths.size();
  st.log_p_leaves = static_cast<double>(prefix);
  std::size_t lo = 0;
  while (lo < sorted.size()) {
    std::size_t hi = lo + 1;
    while (hi < sorted.size() && std::memcmp(sorted[lo]->data(), sorted[hi]->data(), prefix) == 0) ++hi;
    ++st.nonempty;
    if (hi - lo > bucket) ++st.overfilled;
    st.largest_group = std::max(st.largest_group, hi - lo);
    lo = hi;
  }
  return st;
}

StaticStats build_static(const TreeParams& params, std::span<const std::vector<double>> points,
                         unsigned threads) {
  params.validate();
  const Curve curve(params.curve_params());
  const auto paths = point_paths(curve, points, threads);
  std::vector<const Path*> ptrs;
  for (const auto& path : paths) ptrs.push_back(&path);
  return build_static(ptrs, params.bucket, params.n, params.p);
}

}  // namespace grayhilbert
