#include "clusterkit/neighbors.hpp"

#include <algorithm>
#include <string>

namespace clusterkit {

bool NeighborTable::contains(std::size_t i, std::size_t j) const {
  const auto& list = lists[i];
  return std::binary_search(list.begin(), list.end(), j);
}

std::size_t NeighborTable::count_without_self(std::size_t i) const {
  const std::size_t count = lists[i].size();
  return (include_self && contains(i, i)) ? count - 1 : count;
}

NeighborTable radius_neighbors(const CondensedDistanceMatrix& distances, double r,
                               bool include_self) {
  if (r < 0.0) throw Error(ErrorCode::NegativeRadius, "radius must be >= 0");
  const std::size_t n = distances.n();
  NeighborTable table;
  table.kind = NeighborKind::Radius;
  table.radius = r;
  table.include_self = include_self;
  table.lists.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distances(i, j) <= r) {
        table.lists[i].push_back(j);
        table.lists[j].push_back(i);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (include_self) table.lists[i].push_back(i);
    std::sort(table.lists[i].begin(), table.lists[i].end());
  }
  return table;
}

NeighborTable knn_neighbors(const CondensedDistanceMatrix& distances, std::size_t k,
                            bool include_self) {
  const std::size_t n = distances.n();
  if (k < 1 || k + 1 > n) {
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
  }
  NeighborTable table;
  table.kind = NeighborKind::KNearest;
  table.k = k;
  table.include_self = include_self;
  table.lists.resize(n);
  table.kth_distance.emplace(n);
  std::vector<double> row;
  row.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i || include_self) row.push_back(distances(i, j));
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    const double dk = row[k - 1];
    (*table.kth_distance)[i] = dk;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i ? include_self : distances(i, j) <= dk) table.lists[i].push_back(j);
    }
  }
  return table;
}

std::vector<IndexPair> to_adjacency(const NeighborTable& table) {
  std::vector<IndexPair> pairs;
  for (std::size_t i = 0; i < table.lists.size(); ++i) {
    for (std::size_t j : table.lists[i]) pairs.emplace_back(i, j);
  }
  return pairs;
}

std::vector<IndexPair> symmetrize_knn(const NeighborTable& table, SymmetrizeMode mode) {
  if (table.kind != NeighborKind::KNearest) {
    throw Error(ErrorCode::KindMismatch, "symmetrize_knn needs a k-nearest table");
  }
  std::vector<IndexPair> pairs;
  for (std::size_t i = 0; i < table.lists.size(); ++i) {
    for (std::size_t j : table.lists[i]) {
      if (j == i) continue;
      const bool reverse = table.contains(j, i);
      if (mode == SymmetrizeMode::Mutual) {
        if (reverse && i < j) pairs.emplace_back(i, j);
      } else if (i < j || !reverse) {
        pairs.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace clusterkit
