#include <doctest.h>

#include <set>

#include "clusterkit/io.hpp"
#include "clusterkit/neighbors.hpp"
#include "support.hpp"

using namespace clusterkit;
using Lists = std::vector<std::vector<std::size_t>>;

namespace {

CondensedDistanceMatrix iris_head() {
  const Dataset d = testsupport::iris();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < 4; ++i) rows.emplace_back(d.point(i).begin(), d.point(i).end());
  return pairwise(make_dataset(rows));
}

// All j (self optional) within the k-th smallest distance of i.
Lists knn_oracle(const CondensedDistanceMatrix& dm, std::size_t k, bool include_self) {
  Lists out(dm.n());
  for (std::size_t i = 0; i < dm.n(); ++i) {
    std::vector<double> ds;
    for (std::size_t j = 0; j < dm.n(); ++j) {
      if (j != i || include_self) ds.push_back(dm(i, j));
    }
    std::sort(ds.begin(), ds.end());
    const double dk = ds[k - 1];
    for (std::size_t j = 0; j < dm.n(); ++j) {
      if ((j != i || include_self) && dm(i, j) <= dk) out[i].push_back(j);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("radius_neighbors on the first Iris rows") {
  const CondensedDistanceMatrix dm = iris_head();
  // Brute force over the closed ball. The distances 0.54/0.51/0.65/0.30/
  // 0.33/0.24 put rows 1-3 within 0.52 of each other and row 0 next to 2.
  Lists expected(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (dm(i, j) <= 0.52) expected[i].push_back(j);
    }
  }
  CHECK(expected == Lists{{0, 2}, {1, 2, 3}, {0, 1, 2, 3}, {1, 2, 3}});
  const NeighborTable t = radius_neighbors(dm, 0.52, true);
  CHECK(t.lists == expected);
  CHECK(t.count_without_self(2) == 3);
  CHECK(radius_neighbors(dm, 0.0, false).lists == Lists(4));
  CHECK_THROWS_AS(radius_neighbors(dm, -0.1, false), Error);
}

TEST_CASE("to_adjacency mirrors the lists") {
  const NeighborTable t = radius_neighbors(iris_head(), 0.52, true);
  const auto adj = to_adjacency(t);
  std::set<IndexPair> pairs(adj.begin(), adj.end());
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(pairs.count({i, j}) == static_cast<std::size_t>(t.contains(i, j)));
      CHECK(pairs.count({i, j}) == pairs.count({j, i}));
    }
  }
  NeighborTable empty;
  empty.lists = Lists(3);
  CHECK(to_adjacency(empty).empty());
}

TEST_CASE("knn_neighbors small cases") {
  const CondensedDistanceMatrix line = pairwise(make_dataset({{0}, {1}, {3}}));
  const NeighborTable t = knn_neighbors(line, 1, false);
  CHECK(t.lists == Lists{{1}, {0}, {1}});
  CHECK(t.kth_distance->at(2) == 2.0);
  CHECK(knn_neighbors(line, 2, false).lists == Lists{{1, 2}, {0, 2}, {0, 1}});
  CHECK_THROWS_AS(knn_neighbors(line, 0, false), Error);
  CHECK_THROWS_AS(knn_neighbors(line, 3, false), Error);

  // Square corners: the two side neighbors tie.
  const CondensedDistanceMatrix sq = pairwise(make_dataset({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  const NeighborTable s1 = knn_neighbors(sq, 1, false);
  CHECK(s1.lists[0] == std::vector<std::size_t>{1, 3});
  const NeighborTable s2 = knn_neighbors(sq, 2, false);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s2.lists[i].size() == 2);
    CHECK(s2.kth_distance->at(i) == 1.0);
  }
  // Self counts as the nearest point and takes one place.
  CHECK(knn_neighbors(line, 1, true).lists == Lists{{0}, {1}, {2}});
  CHECK(knn_neighbors(line, 2, true).lists == Lists{{0, 1}, {0, 1}, {1, 2}});
}

TEST_CASE("knn_neighbors matches the brute-force oracle") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    // Integer coordinates produce plenty of ties.
    std::uniform_int_distribution<int> u(0, 4);
    std::vector<std::vector<double>> rows(15, std::vector<double>(2));
    for (auto& r : rows) {
      for (double& v : r) v = u(rng);
    }
    const CondensedDistanceMatrix dm = pairwise(make_dataset(rows));
    for (std::size_t k : {1u, 3u, 6u}) {
      for (bool self : {false, true}) {
        const NeighborTable t = knn_neighbors(dm, k, self);
        CHECK(t.lists == knn_oracle(dm, k, self));
        for (const auto& l : t.lists) CHECK(l.size() >= k);
      }
    }
  }
}

TEST_CASE("neighbor lists grow monotonically") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const CondensedDistanceMatrix dm = pairwise(make_dataset(testsupport::random_rows(rng, 20, 2)));
    const NeighborTable small = radius_neighbors(dm, 0.2, false);
    const NeighborTable large = radius_neighbors(dm, 0.35, false);
    const NeighborTable k2 = knn_neighbors(dm, 2, false);
    const NeighborTable k5 = knn_neighbors(dm, 5, false);
    for (std::size_t i = 0; i < dm.n(); ++i) {
      CHECK(std::includes(large.lists[i].begin(), large.lists[i].end(), small.lists[i].begin(),
                          small.lists[i].end()));
      CHECK(std::includes(k5.lists[i].begin(), k5.lists[i].end(), k2.lists[i].begin(),
                          k2.lists[i].end()));
      for (std::size_t j : small.lists[i]) CHECK(small.contains(j, i));
    }
  }
}

TEST_CASE("symmetrize_knn") {
  // 0 -- 1 ---- 2 : 2's nearest is 1, 1's nearest is 0.
  const CondensedDistanceMatrix line = pairwise(make_dataset({{0}, {1}, {3}}));
  const NeighborTable t = knn_neighbors(line, 1, false);
  CHECK(symmetrize_knn(t, SymmetrizeMode::Union) == std::vector<IndexPair>{{0, 1}, {1, 2}});
  CHECK(symmetrize_knn(t, SymmetrizeMode::Mutual) == std::vector<IndexPair>{{0, 1}});
  CHECK_THROWS_AS(symmetrize_knn(radius_neighbors(line, 1.0, false), SymmetrizeMode::Union), Error);

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const CondensedDistanceMatrix dm = pairwise(make_dataset(testsupport::random_rows(rng, 10, 2)));
    for (bool self : {false, true}) {
      const NeighborTable kt = knn_neighbors(dm, 3, self);
      const Lists oracle = knn_oracle(dm, 3, self);
      auto has = [&](std::size_t a, std::size_t b) {
        return std::find(oracle[a].begin(), oracle[a].end(), b) != oracle[a].end();
      };
      std::vector<IndexPair> uni, mut;
      for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = i + 1; j < 10; ++j) {
          if (has(i, j) || has(j, i)) uni.emplace_back(i, j);
          if (has(i, j) && has(j, i)) mut.emplace_back(i, j);
        }
      }
      const auto u = symmetrize_knn(kt, SymmetrizeMode::Union);
      const auto m = symmetrize_knn(kt, SymmetrizeMode::Mutual);
      CHECK(u == uni);
      CHECK(m == mut);
      CHECK(std::includes(u.begin(), u.end(), m.begin(), m.end()));
    }
  }
}

TEST_CASE("moons neighborhoods at r = 0.15") {
  const Dataset moons = gen_moons(2000, 0.07, 0);
  const NeighborTable t = radius_neighbors(pairwise(moons), 0.15, false);
  std::size_t with_twenty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) with_twenty += t.lists[i].size() == 20;
  // The illustrated point with 20 neighbors is a typical one, not an outlier.
  CHECK(with_twenty > 0);
}
