#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "grayhilbert/errors.hpp"
#include "grayhilbert/index.hpp"
#include "oracles.hpp"

using namespace grayhilbert;

namespace {

using Points = std::vector<std::vector<double>>;

TreeParams params(unsigned p, std::size_t n, std::size_t s, std::size_t k_max = 20,
                  Variant v = Variant::bubble) {
  return TreeParams{Prime(p), n, s, k_max, v, {}};
}

Points random_points(std::mt19937_64& rng, std::size_t count, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Points pts(count, std::vector<double>(n));
  for (auto& x : pts) {
    for (auto& v : x) v = u(rng);
  }
  return pts;
}

// Points snapped to a coarse grid so that duplicates and shared cells are common.
Points grid_points(std::mt19937_64& rng, std::size_t count, std::size_t n, unsigned steps) {
  std::uniform_int_distribution<unsigned> d(0, steps);
  Points pts(count, std::vector<double>(n));
  for (auto& x : pts) {
    for (auto& v : x) v = static_cast<double>(d(rng)) / steps;
  }
  return pts;
}

Path oracle_path(const Curve& curve, const std::vector<double>& x) {
  return index_path(curve.cell_to_index(curve.quantize(x)));
}

// Leaves straight from the definition: a point's leaf is its shortest prefix
// shared by at most s points (or the full path).
std::size_t leaves_by_definition(const std::vector<Path>& paths, std::size_t s) {
  std::set<Path> leaves;
  for (const auto& path : paths) {
    for (std::size_t d = 0; d <= path.size(); ++d) {
      std::size_t sharing = 0;
      for (const auto& other : paths) sharing += std::equal(path.begin(), path.begin() + d, other.begin());
      if (sharing <= s || d == path.size()) {
        leaves.insert(Path(path.begin(), path.begin() + d));
        break;
      }
    }
  }
  return leaves.size();
}

LocalOrderFn weight_order() {
  return [](const LocalPiece& piece) {
    std::size_t weight = 0;
    for (auto d : piece.entry.digits()) weight += d != 0;
    if (piece.direction) {
      return weight % 2 ? ring_perm(piece.n, *piece.direction) : bubble_perm(piece.n, *piece.direction);
    }
    return ring_perm(piece.n, weight % piece.n);
  };
}

}  // namespace

TEST_CASE("tree paths agree with cell_to_index") {
  std::mt19937_64 rng(11);
  for (unsigned p : {2u, 3u, 5u}) {
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
      for (Variant v : {Variant::bubble, Variant::ring, Variant::custom}) {
        if (v == Variant::custom && p != 2 && n == 1) continue;
        auto prm = params(p, n, 1, 6, v);
        if (v == Variant::custom) prm.custom_order = weight_order();
        const Curve curve(prm.curve_params());
        for (const auto& x : random_points(rng, 200, n)) {
          CAPTURE(p);
          CAPTURE(n);
          REQUIRE(point_path(curve, x) == oracle_path(curve, x));
        }
      }
    }
  }
}

TEST_CASE("point_paths matches the sequential path on any thread count") {
  std::mt19937_64 rng(5);
  const auto pts = random_points(rng, 1500, 3);
  const Curve curve(params(2, 3, 1).curve_params());
  std::vector<Path> expected;
  for (const auto& x : pts) expected.push_back(point_path(curve, x));
  for (unsigned t : {1u, 2u, 3u, 8u}) CHECK(point_paths(curve, pts, t) == expected);
  Points bad = pts;
  bad[700][1] = 1.5;
  CHECK_THROWS_AS(point_paths(curve, bad, 4), RangeError);
}

TEST_CASE("find_node descends along the curve digits") {
  SUBCASE("single node tree") {
    ScaledTree tree(params(2, 2, 4));
    CHECK(tree.find_node(std::vector<double>{0.3, 0.7}) == ScaledTree::kRoot);
    tree.insert(0, std::vector<double>{0.3, 0.7});
    CHECK(tree.find_node(std::vector<double>{0.9, 0.9}) == ScaledTree::kRoot);
  }
  SUBCASE("one full iteration, p = 2, n = 2") {
    const Points quad = {{0.1, 0.1}, {0.1, 0.9}, {0.9, 0.9}, {0.9, 0.1}};
    auto tree = ScaledTree::build(params(2, 2, 1), quad);
    Path digits;
    const auto leaf = tree.find_node(std::vector<double>{0.9, 0.1}, &digits);
    REQUIRE(leaf);
    CHECK(tree.depth(*leaf) == 2);
    CHECK(tree.bucket(*leaf) == std::vector<PointId>{3});
    // rank 3 of the Gray order 00, 01, 11, 10
    CHECK(digits == Path{1, 1});
    const auto leaves = tree.leaves();
    REQUIRE(leaves.size() == 4);
    std::vector<PointId> order;
    for (const auto& l : leaves) order.push_back(l.ids.front());
    CHECK(order == std::vector<PointId>{0, 1, 2, 3});
  }
  SUBCASE("descent digits are a prefix of the oracle path") {
    std::mt19937_64 rng(3);
    for (unsigned p : {2u, 3u}) {
      for (Variant v : {Variant::bubble, Variant::ring}) {
        const auto pts = random_points(rng, 300, 3);
        const auto tree = ScaledTree::build(params(p, 3, 1, 8, v), pts);
        for (std::size_t i = 0; i < pts.size(); ++i) {
          Path digits;
          const auto leaf = tree.find_node(pts[i], &digits);
          REQUIRE(leaf);
          CHECK(tree.bucket(*leaf) == std::vector<PointId>{i});
          const auto full = oracle_path(tree.curve(), pts[i]);
          REQUIRE(std::equal(digits.begin(), digits.end(), full.begin()));
        }
      }
    }
  }
  SUBCASE("unoccupied regions and bad input") {
    auto tree = ScaledTree::build(params(2, 2, 1), Points{{0.1, 0.1}, {0.2, 0.2}});
    CHECK_FALSE(tree.find_node(std::vector<double>{0.9, 0.9}).has_value());
    CHECK_THROWS_AS(tree.find_node(std::vector<double>{1.2, 0.1}), RangeError);
    CHECK_THROWS_AS(tree.find_node(std::vector<double>{0.1}), ContractViolation);
  }
}

TEST_CASE("insert examples") {
  SUBCASE("empty tree") {
    ScaledTree tree(params(2, 2, 1));
    tree.insert(7, std::vector<double>{0.5, 0.5});
    const auto st = tree.stats();
    CHECK(st.leaves == 1);
    CHECK(st.nodes == 1);
    CHECK(tree.bucket(ScaledTree::kRoot) == std::vector<PointId>{7});
  }
  SUBCASE("two points sharing the first iteration cell") {
    ScaledTree tree(params(2, 2, 1));
    tree.insert(0, std::vector<double>{0.1, 0.1});
    tree.insert(1, std::vector<double>{0.1, 0.4});
    const auto leaves = tree.leaves();
    REQUIRE(leaves.size() == 2);
    for (const auto& l : leaves) {
      CHECK(l.depth > 2);
      CHECK(l.depth <= 4);
    }
    CHECK(leaves[0].depth == leaves[1].depth);
    CHECK(std::equal(leaves[0].prefix.begin(), leaves[0].prefix.begin() + 2, leaves[1].prefix.begin()));
    tree.check_invariants();
  }
  SUBCASE("duplicates end in an overfilled leaf at the maximal level") {
    ScaledTree tree(params(2, 2, 1, 5));
    tree.insert(0, std::vector<double>{0.3, 0.3});
    tree.insert(1, std::vector<double>{0.3, 0.3});
    const auto st = tree.stats();
    CHECK(st.leaves == 1);
    CHECK(st.overfilled == 1);
    CHECK(st.max_depth == 10);
    tree.check_invariants();
  }
  SUBCASE("ids are unique") {
    ScaledTree tree(params(2, 2, 1));
    tree.insert(0, std::vector<double>{0.3, 0.3});
    CHECK_THROWS_AS(tree.insert(0, std::vector<double>{0.6, 0.3}), ContractViolation);
  }
}

TEST_CASE("remove examples") {
  SUBCASE("only point") {
    ScaledTree tree(params(2, 2, 1));
    tree.insert(0, std::vector<double>{0.3, 0.3});
    tree.remove(0);
    CHECK(structurally_equal(tree, ScaledTree(params(2, 2, 1))));
    CHECK(tree.stats().leaves == 0);
    CHECK_THROWS_AS(tree.remove(0), NotFoundError);
  }
  SUBCASE("sibling leaves collapse") {
    ScaledTree tree(params(2, 2, 1));
    tree.insert(0, std::vector<double>{0.1, 0.1});
    tree.insert(1, std::vector<double>{0.1, 0.4});
    tree.remove(1);
    CHECK(tree.stats().nodes == 1);
    CHECK(tree.is_leaf(ScaledTree::kRoot));
    CHECK(tree.bucket(ScaledTree::kRoot) == std::vector<PointId>{0});
  }
}

TEST_CASE("insert, rebuild and remove agree on random sets") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 40; ++round) {
    const unsigned p = round % 3 == 2 ? 3 : 2;
    const std::size_t n = 1 + round % 4;
    const std::size_t s = 1 + round % 5;
    const Variant v = round % 2 ? Variant::ring : Variant::bubble;
    const std::size_t count = 1 + rng() % 300;
    const auto pts = round % 4 == 0 ? grid_points(rng, count, n, 6) : random_points(rng, count, n);
    const auto prm = params(p, n, s, 6, v);
    CAPTURE(round);

    const auto built = ScaledTree::build(prm, pts);
    built.check_invariants();

    std::vector<PointId> ids(count);
    for (PointId i = 0; i < count; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    ScaledTree grown(prm);
    for (PointId id : ids) grown.insert(id, pts[id]);
    grown.check_invariants();
    REQUIRE(structurally_equal(built, grown));

    // the streaming counter sees the same tree
    const Curve curve(prm.curve_params());
    auto paths = point_paths(curve, pts, 1);
    std::vector<const Path*> sorted;
    for (const auto& path : paths) sorted.push_back(&path);
    std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return *a < *b; });
    const auto a = built.stats();
    const auto b = scaled_stats(sorted, s, prm.max_levels());
    CHECK(a.leaves == b.leaves);
    CHECK(a.nodes == b.nodes);
    CHECK(a.overfilled == b.overfilled);
    CHECK(a.depth_histogram == b.depth_histogram);
    if (count <= 120) CHECK(a.leaves == leaves_by_definition(paths, s));

    // removing half keeps it equal to a tree built from the rest
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t half = count / 2;
    for (std::size_t i = 0; i < half; ++i) grown.remove(ids[i]);
    grown.check_invariants();
    ScaledTree rest(prm);
    for (std::size_t i = half; i < count; ++i) rest.insert(ids[i], pts[ids[i]]);
    REQUIRE(structurally_equal(grown, rest));
    for (std::size_t i = half; i < count; ++i) grown.remove(ids[i]);
    grown.check_invariants();
    REQUIRE(structurally_equal(grown, ScaledTree(prm)));
  }
}

TEST_CASE("minimality: merging any split overfills a bucket") {
  std::mt19937_64 rng(8);
  for (std::size_t s : {1u, 2u, 3u}) {
    const auto pts = grid_points(rng, 60, 2, 9);
    const auto tree = ScaledTree::build(params(2, 2, s, 5), pts);
    const auto leaves = tree.leaves();
    // every leaf's parent prefix is shared by more than s points
    for (const auto& leaf : leaves) {
      if (leaf.depth == 0) continue;
      const Path parent(leaf.prefix.begin(), leaf.prefix.end() - 1);
      std::size_t below = 0;
      for (const auto& other : leaves) {
        if (other.prefix.size() >= parent.size() &&
            std::equal(parent.begin(), parent.end(), other.prefix.begin())) {
          below += other.ids.size();
        }
      }
      CHECK(below > s);
    }
  }
}

TEST_CASE("s = 1 leaves are the distinct quantized points") {
  std::mt19937_64 rng(9);
  const auto pts = grid_points(rng, 400, 3, 4);
  const auto prm = params(2, 3, 1);
  const Curve curve(prm.curve_params());
  std::set<CellWord, bool (*)(const CellWord&, const CellWord&)> distinct(
      [](const CellWord& a, const CellWord& b) { return a.coeffs < b.coeffs; });
  for (const auto& x : pts) distinct.insert(curve.quantize(x));
  CHECK(ScaledTree::build(prm, pts).stats().leaves == distinct.size());
}

TEST_CASE("scaled partition") {
  SUBCASE("all distinct at depth 1") {
    const Points pts = {{0.9, 0.1}, {0.1, 0.1}, {0.9, 0.9}, {0.1, 0.9}};
    const auto part = ScaledPartition::build(params(2, 2, 1), pts);
    const auto classes = part.classes();
    REQUIRE(classes.size() == 1);
    CHECK(classes.begin()->first == 1);
    CHECK(part.order() == std::vector<PointId>{1, 3, 2, 0});
  }
  SUBCASE("peeling") {
    const Points pts = {{0.1, 0.1}, {0.9, 0.9}, {0.1, 0.4}};
    const auto part = ScaledPartition::build(params(2, 2, 1), pts);
    const auto classes = part.classes();
    REQUIRE(classes.size() == 2);
    CHECK(classes.at(1) == std::vector<PointId>{1});
    CHECK(classes.at(2) == std::vector<PointId>{0, 2});
    CHECK(part.resolution(2) == 2);
    CHECK_THROWS_AS(part.resolution(9), NotFoundError);
  }
  SUBCASE("duplicates get k_max and keep insertion order") {
    const Points pts = {{0.3, 0.3}, {0.7, 0.2}, {0.3, 0.3}};
    const auto part = ScaledPartition::build(params(2, 2, 1, 6), pts);
    CHECK(part.resolution(0) == 6);
    CHECK(part.resolution(2) == 6);
    const auto order = part.order();
    CHECK(std::find(order.begin(), order.end(), 0) < std::find(order.begin(), order.end(), 2));
  }
  SUBCASE("order is the curve order at full depth") {
    std::mt19937_64 rng(4);
    for (unsigned p : {2u, 3u}) {
      const auto pts = random_points(rng, 250, 2);
      const auto prm = params(p, 2, 1, 8, Variant::ring);
      const auto part = ScaledPartition::build(prm, pts);
      const Curve curve(prm.curve_params());
      std::vector<PointId> expected(pts.size());
      for (PointId i = 0; i < pts.size(); ++i) expected[i] = i;
      std::stable_sort(expected.begin(), expected.end(), [&](PointId a, PointId b) {
        return curve.cell_to_index(curve.quantize(pts[a])) < curve.cell_to_index(curve.quantize(pts[b]));
      });
      CHECK(part.order() == expected);
      std::size_t total = 0;
      for (const auto& [k, ids] : part.classes()) total += ids.size();
      CHECK(total == pts.size());
    }
  }
}

TEST_CASE("static tree groups points by their depth-k cell") {
  std::mt19937_64 rng(6);
  const auto pts = grid_points(rng, 500, 2, 16);
  for (std::size_t s : {1u, 3u, 10u, 499u}) {
    const auto prm = params(2, 2, s);
    const auto st = build_static(prm, pts);
    const Curve curve(prm.curve_params());
    std::map<std::vector<DigitVec>, std::size_t> groups;
    for (const auto& x : pts) {
      auto cell = curve.quantize(x).coeffs;
      cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(st.k), cell.end());
      ++groups[cell];
    }
    std::size_t over = 0, largest = 0;
    for (const auto& [cell, size] : groups) {
      over += size > s;
      largest = std::max(largest, size);
    }
    CHECK(st.nonempty == groups.size());
    CHECK(st.overfilled == over);
    CHECK(st.largest_group == largest);
    CHECK(st.log_p_leaves == doctest::Approx(2.0 * st.k));
  }
  CHECK_THROWS_AS(build_static(params(2, 2, 500), pts), ContractViolation);
  CHECK_THROWS_AS(build_static(params(2, 2, 3, 1), pts), RangeError);
}
