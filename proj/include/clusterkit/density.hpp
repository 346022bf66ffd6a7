#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/hierarchy.hpp"
#include "clusterkit/metrics.hpp"
#include "clusterkit/neighbors.hpp"

namespace clusterkit {

// ---------------------------------------------------------------------------
// Grid histograms
// ---------------------------------------------------------------------------

struct GridAxis {
  double low = 0.0;
  double high = 0.0;
  std::size_t n_bins = 1;
  double width = 1.0;
};

// Regular grid over a 1-D or 2-D dataset. Cell ids are flat indices
// (row-major over the axes); bins are half-open except the last, which
// includes the upper edge.
class GridHistogram {
 public:
  GridHistogram(std::vector<GridAxis> axes, std::vector<std::size_t> cell_of_point);

  const std::vector<GridAxis>& axes() const noexcept { return axes_; }
  std::size_t dims() const noexcept { return axes_.size(); }
  std::size_t total_cells() const;
  std::size_t n_points() const noexcept { return cell_of_point_.size(); }

  std::size_t cell_of_point(std::size_t i) const { return cell_of_point_[i]; }
  const std::map<std::size_t, std::size_t>& counts() const noexcept { return counts_; }
  std::size_t count(std::size_t cell) const;

  std::vector<std::size_t> cell_index(std::size_t cell) const;
  std::size_t flat_index(const std::vector<std::size_t>& index) const;
  // Face-adjacent cells (one axis differs by exactly 1).
  std::vector<std::size_t> face_neighbors(std::size_t cell) const;
  // Non-empty cells in ascending flat-index order; grid_hierarchy uses
  // positions in this list as leaf ids.
  std::vector<std::size_t> nonempty_cells() const;

 private:
  std::vector<GridAxis> axes_;
  std::vector<std::size_t> cell_of_point_;
  std::map<std::size_t, std::size_t> counts_;
};

// Bin counts per dimension; bounds default to the data range.
GridHistogram build_grid(const Dataset& data, const std::vector<std::size_t>& n_bins);
// Fixed cell width per dimension: n_bins = ceil((high - low) / width).
GridHistogram build_grid_by_width(const Dataset& data, const std::vector<double>& widths);

// Dense cells (count >= min_count) joined through shared faces form
// clusters; points in sparse cells are noise.
LabelVector grid_threshold_cluster(const GridHistogram& grid, std::size_t min_count);

// Descending hierarchy over non-empty cells with adjacency weight
// min(count_a, count_b).
MergeHierarchy grid_hierarchy(const GridHistogram& grid);

// ---------------------------------------------------------------------------
// Point neighborhoods: DBSCAN, mutual reachability, shared neighbors
// ---------------------------------------------------------------------------

// mask[i] iff i has at least n_c neighbors other than itself.
std::vector<bool> core_points(const NeighborTable& table, std::size_t n_c);

enum class BorderPolicy { Noise, FirstCore };

// Breadth-first expansion from core points in ascending index order.
// Clusters with fewer than min_cluster_size members are turned into noise.
LabelVector dbscan(const NeighborTable& table, std::size_t n_c,
                   BorderPolicy border_policy = BorderPolicy::FirstCore,
                   std::size_t min_cluster_size = 1);

// Distance to the n_c-th nearest other point.
std::vector<double> core_distances(const CondensedDistanceMatrix& distances, std::size_t n_c);

CondensedDistanceMatrix mutual_reachability(const CondensedDistanceMatrix& distances,
                                            std::size_t n_c);

// Undirected weighted edges without self loops or duplicate pairs, kept
// sorted by (i, j).
class WeightedEdgeSet {
 public:
  WeightedEdgeSet() = default;
  WeightedEdgeSet(std::size_t n, std::vector<WeightedEdge> edges);

  std::size_t n() const noexcept { return n_; }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return edges_.size(); }
  // Weight of (i, j) or -1 when absent.
  double weight(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_ = 0;
  std::vector<WeightedEdge> edges_;
};

// |lists[i] ∩ lists[j]| over k-nearest lists with self removed.
WeightedEdgeSet snn_similarity(const NeighborTable& table, bool require_mutual = true);

// |B_r(i) ∩ B_r(j)| for pairs within r of each other. count_self puts each
// point into its own neighborhood first.
WeightedEdgeSet commonnn_similarity(const NeighborTable& table, bool count_self = true);

// Components of the edges with weight >= n_c; singletons are noise.
LabelVector shared_neighbor_cluster(const WeightedEdgeSet& edges, double n_c);

// Maximum spanning forest merged in decreasing weight order.
MergeHierarchy shared_neighbor_hierarchy(const WeightedEdgeSet& edges);

// ---------------------------------------------------------------------------
// 1-D level sets
// ---------------------------------------------------------------------------

struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sd = 1.0;
};

class GaussianMixture1D {
 public:
  explicit GaussianMixture1D(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const noexcept { return components_; }
  double density(double x) const;

 private:
  std::vector<GaussianComponent> components_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Maximal intervals of [lo, hi] where density >= level, from a grid scan
// with boundary crossings bisected to 1e-8.
std::vector<Interval> levelset_components_1d(const GaussianMixture1D& mix, double level,
                                             double lo, double hi, std::size_t grid_n = 4000);

}  // namespace clusterkit
