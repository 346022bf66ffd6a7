#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/metrics.hpp"

namespace clusterkit {

struct WeightedEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// One agglomerative merge: clusters a and b join at `height` into a cluster
// of `size` members. Row r creates cluster id n + r; leaves are 0..n-1.
struct MergeRow {
  std::size_t a = 0;
  std::size_t b = 0;
  double height = 0.0;
  std::size_t size = 0;

  friend bool operator==(const MergeRow&, const MergeRow&) = default;
};

// Ascending: heights are dissimilarities, merges happen as they grow.
// Descending: heights are similarities (e.g. shared-neighbor counts, cell
// densities), merges happen as they shrink.
enum class MergeOrder { Ascending, Descending };

// SciPy-style Z matrix. A hierarchy built from a disconnected graph is a
// forest and has fewer than n - 1 rows.
struct MergeHierarchy {
  std::size_t n = 0;
  std::vector<MergeRow> rows;
  MergeOrder order = MergeOrder::Ascending;

  bool complete() const noexcept { return n >= 1 && rows.size() + 1 == n; }
  // Throws InvalidArgument on a malformed table.
  void validate() const;
  // Leaf indices below cluster id c.
  std::vector<std::size_t> leaves(std::size_t c) const;
};

struct SpanningTree {
  std::size_t n = 0;
  std::vector<WeightedEdge> edges;

  double total_weight() const;
};

enum class Linkage { Single, Complete, Average };

Linkage parse_linkage(std::string_view name);
std::string_view to_string(Linkage linkage);

// Matrix-based agglomeration with the Lance-Williams update; O(n^3).
// Ties go to the lexicographically smallest pair of active slots.
MergeHierarchy agglomerate(const CondensedDistanceMatrix& distances, Linkage linkage);

// Prim over the implicit complete graph on n vertices.
SpanningTree minimum_spanning_tree(std::size_t n,
                                   const std::function<double(std::size_t, std::size_t)>& weight);
SpanningTree minimum_spanning_tree(const CondensedDistanceMatrix& distances);

// Kruskal-style single linkage over an arbitrary edge list: edges are taken
// in `order` of weight (ties by index pair) and every edge joining two
// components produces a row.
MergeHierarchy hierarchy_from_edges(std::size_t n, std::vector<WeightedEdge> edges,
                                    MergeOrder order);

MergeHierarchy single_linkage_from_mst(const SpanningTree& tree);

// Applies every merge at or below t (at or above t for Descending
// hierarchies). Components smaller than min_size are noise.
LabelVector cut_by_threshold(const MergeHierarchy& h, double t, std::size_t min_size = 1);

// Applies the first n - k merges, leaving k clusters.
LabelVector cut_by_count(const MergeHierarchy& h, std::size_t k);

struct CondensedNode {
  int parent = -1;
  double birth = 0.0;  // lambda at which the node appears
  double death = 0.0;  // lambda at which it splits or dissolves
  std::size_t size = 0;
  std::vector<std::size_t> children;
};

struct PointFallout {
  std::size_t point = 0;
  std::size_t node = 0;
  double lambda = 0.0;
};

// Merge tree reduced to splits between children of at least
// min_cluster_size members. Node 0 is the root.
struct CondensedTree {
  std::size_t n_points = 0;
  std::size_t min_cluster_size = 0;
  std::vector<CondensedNode> nodes;
  std::vector<PointFallout> fallouts;

  // Sum over the node's members of (lambda leaving the node - birth).
  double stability(std::size_t node) const;
};

// With heights_are_distances, lambda = 1 / height; zero heights map to the
// largest finite lambda in the tree. Otherwise lambda = height.
CondensedTree condense(const MergeHierarchy& h, std::size_t min_cluster_size,
                       bool heights_are_distances = true);

// Excess-of-mass selection. The root is selected only when it has no
// children. Points outside every selected node are noise.
LabelVector select_by_persistence(const CondensedTree& tree);

}  // namespace clusterkit
