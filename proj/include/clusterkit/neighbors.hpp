#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "clusterkit/metrics.hpp"

namespace clusterkit {

enum class NeighborKind { Radius, KNearest };

// Sorted per-point neighbor index lists and the query that produced them.
struct NeighborTable {
  NeighborKind kind = NeighborKind::Radius;
  double radius = 0.0;   // Radius kind
  std::size_t k = 0;     // KNearest kind
  bool include_self = false;
  std::vector<std::vector<std::size_t>> lists;
  std::optional<std::vector<double>> kth_distance;  // KNearest kind

  std::size_t size() const noexcept { return lists.size(); }
  bool contains(std::size_t i, std::size_t j) const;
  // Neighbor count of i excluding i itself.
  std::size_t count_without_self(std::size_t i) const;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

// Closed ball: j is listed for i iff d(i, j) <= r.
NeighborTable radius_neighbors(const CondensedDistanceMatrix& distances, double r,
                               bool include_self);

// Every j with d(i, j) <= d_k(i) is listed, so ties at d_k can push a list
// beyond k entries. With include_self the point is its own nearest
// neighbor and takes one of the k places.
NeighborTable knn_neighbors(const CondensedDistanceMatrix& distances, std::size_t k,
                            bool include_self);

// Directed (i, j) pairs with j in lists[i], sorted lexicographically.
std::vector<IndexPair> to_adjacency(const NeighborTable& table);

enum class SymmetrizeMode { Union, Mutual };

// Undirected pairs (i < j), sorted. Self pairs are never emitted.
std::vector<IndexPair> symmetrize_knn(const NeighborTable& table, SymmetrizeMode mode);

}  // namespace clusterkit
