#include "clusterkit/density.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "clusterkit/graph.hpp"

namespace clusterkit {

GridHistogram::GridHistogram(std::vector<GridAxis> axes, std::vector<std::size_t> cell_of_point)
    : axes_(std::move(axes)), cell_of_point_(std::move(cell_of_point)) {
  for (std::size_t cell : cell_of_point_) ++counts_[cell];
}

std::size_t GridHistogram::total_cells() const {
  std::size_t total = 1;
  for (const auto& axis : axes_) total *= axis.n_bins;
  return total;
}

std::size_t GridHistogram::count(std::size_t cell) const {
  const auto it = counts_.find(cell);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::size_t> GridHistogram::cell_index(std::size_t cell) const {
  std::vector<std::size_t> index(axes_.size());
  for (std::size_t d = axes_.size(); d-- > 0;) {
    index[d] = cell % axes_[d].n_bins;
    cell /= axes_[d].n_bins;
  }
  return index;
}

std::size_t GridHistogram::flat_index(const std::vector<std::size_t>& index) const {
  std::size_t cell = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) cell = cell * axes_[d].n_bins + index[d];
  return cell;
}

std::vector<std::size_t> GridHistogram::face_neighbors(std::size_t cell) const {
  std::vector<std::size_t> out;
  const auto index = cell_index(cell);
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    if (index[d] > 0) {
      auto other = index;
      --other[d];
      out.push_back(flat_index(other));
    }
    if (index[d] + 1 < axes_[d].n_bins) {
      auto other = index;
      ++other[d];
      out.push_back(flat_index(other));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> GridHistogram::nonempty_cells() const {
  std::vector<std::size_t> out;
  out.reserve(counts_.size());
  for (const auto& [cell, _] : counts_) out.push_back(cell);
  return out;
}

namespace {

GridHistogram bin_points(const Dataset& data, std::vector<GridAxis> axes) {
  std::vector<std::size_t> cells(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    std::size_t cell = 0;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      const auto& axis = axes[d];
      const double offset = (data.points()(i, d) - axis.low) / axis.width;
      std::size_t bin = offset <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(offset));
      bin = std::min(bin, axis.n_bins - 1);
      cell = cell * axis.n_bins + bin;
    }
    cells[i] = cell;
  }
  return GridHistogram(std::move(axes), std::move(cells));
}

void require_grid_dims(const Dataset& data, std::size_t given) {
  if (data.m() > 2) {
    throw Error(ErrorCode::DimensionUnsupported,
                "grid clustering supports 1-D and 2-D data, got " + std::to_string(data.m()));
  }
  if (given != data.m()) {
    throw Error(ErrorCode::DimensionMismatch, "one bin setting per dimension required");
  }
}

}  // namespace

GridHistogram build_grid(const Dataset& data, const std::vector<std::size_t>& n_bins) {
  require_grid_dims(data, n_bins.size());
  std::vector<GridAxis> axes;
  for (std::size_t d = 0; d < data.m(); ++d) {
    if (n_bins[d] < 1) throw Error(ErrorCode::InvalidArgument, "n_bins must be >= 1");
    const auto col = data.points().column(d);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    GridAxis axis{*mn, *mx, n_bins[d], 1.0};
    if (*mx > *mn) axis.width = (*mx - *mn) / static_cast<double>(n_bins[d]);
    axes.push_back(axis);
  }
  return bin_points(data, std::move(axes));
}

GridHistogram build_grid_by_width(const Dataset& data, const std::vector<double>& widths) {
  require_grid_dims(data, widths.size());
  std::vector<GridAxis> axes;
  for (std::size_t d = 0; d < data.m(); ++d) {
    if (!(widths[d] > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell width must be > 0");
    const auto col = data.points().column(d);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    const auto bins = static_cast<std::size_t>(std::ceil((*mx - *mn) / widths[d]));
    axes.push_back({*mn, *mx, std::max<std::size_t>(bins, 1), widths[d]});
  }
  return bin_points(data, std::move(axes));
}

LabelVector grid_threshold_cluster(const GridHistogram& grid, std::size_t min_count) {
  if (min_count < 1) throw Error(ErrorCode::InvalidArgument, "min_count must be >= 1");
  const auto cells = grid.nonempty_cells();
  std::map<std::size_t, std::size_t> position;
  for (std::size_t p = 0; p < cells.size(); ++p) position[cells[p]] = p;

  DisjointSet ds(cells.size());
  std::vector<bool> dense(cells.size());
  for (std::size_t p = 0; p < cells.size(); ++p) dense[p] = grid.count(cells[p]) >= min_count;
  for (std::size_t p = 0; p < cells.size(); ++p) {
    if (!dense[p]) continue;
    for (std::size_t other : grid.face_neighbors(cells[p])) {
      const auto it = position.find(other);
      if (it != position.end() && dense[it->second]) ds.unite(p, it->second);
    }
  }
  const LabelVector cell_labels = component_labels(ds, 1, &dense);
  std::vector<int> labels(grid.n_points(), kNoise);
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    labels[i] = cell_labels[position[grid.cell_of_point(i)]];
  }
  return canonicalize_labels(LabelVector(std::move(labels)));
}

MergeHierarchy grid_hierarchy(const GridHistogram& grid) {
  const auto cells = grid.nonempty_cells();
  if (cells.size() < 2) {
    throw Error(ErrorCode::TooFewPoints, "grid hierarchy needs at least 2 non-empty cells");
  }
  std::map<std::size_t, std::size_t> position;
  for (std::size_t p = 0; p < cells.size(); ++p) position[cells[p]] = p;
  std::vector<WeightedEdge> edges;
  for (std::size_t p = 0; p < cells.size(); ++p) {
    for (std::size_t other : grid.face_neighbors(cells[p])) {
      const auto it = position.find(other);
      if (it == position.end() || it->second <= p) continue;
      const double w = static_cast<double>(std::min(grid.count(cells[p]), grid.count(other)));
      edges.push_back({p, it->second, w});
    }
  }
  return hierarchy_from_edges(cells.size(), std::move(edges), MergeOrder::Descending);
}

std::vector<bool> core_points(const NeighborTable& table, std::size_t n_c) {
  if (table.kind != NeighborKind::Radius) {
    throw Error(ErrorCode::KindMismatch, "core points need a radius table");
  }
  std::vector<bool> mask(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) mask[i] = table.count_without_self(i) >= n_c;
  return mask;
}

LabelVector dbscan(const NeighborTable& table, std::size_t n_c, BorderPolicy border_policy,
                   std::size_t min_cluster_size) {
  const auto core = core_points(table, n_c);
  const std::size_t n = table.size();
  std::vector<int> labels(n, kNoise);
  std::vector<bool> visited(n, false);
  int label = 1;
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!core[seed] || visited[seed]) continue;
    visited[seed] = true;
    labels[seed] = label;
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t p = queue.front();
      queue.pop_front();
      if (!core[p]) continue;
      for (std::size_t q : table.lists[p]) {
        if (visited[q]) continue;
        if (!core[q] && border_policy == BorderPolicy::Noise) continue;
        visited[q] = true;
        labels[q] = label;
        queue.push_back(q);
      }
    }
    ++label;
  }
  if (min_cluster_size > 1) {
    std::map<int, std::size_t> sizes;
    for (int l : labels) ++sizes[l];
    for (int& l : labels) {
      if (l != kNoise && sizes[l] < min_cluster_size) l = kNoise;
    }
  }
  return canonicalize_labels(LabelVector(std::move(labels)));
}

std::vector<double> core_distances(const CondensedDistanceMatrix& distances, std::size_t n_c) {
  const std::size_t n = distances.n();
  if (n_c < 1 || n_c + 1 > n) {
    throw Error(ErrorCode::NOutOfRange,
                "n_c=" + std::to_string(n_c) + " outside [1, " + std::to_string(n - 1) + "]");
  }
  std::vector<double> out(n);
  std::vector<double> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(distances(i, j));
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n_c - 1), row.end());
    out[i] = row[n_c - 1];
  }
  return out;
}

CondensedDistanceMatrix mutual_reachability(const CondensedDistanceMatrix& distances,
                                            std::size_t n_c) {
  const auto core = core_distances(distances, n_c);
  const std::size_t n = distances.n();
  std::vector<double> values(distances.values().size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      values[distances.index(i, j)] = std::max({core[i], core[j], distances(i, j)});
    }
  }
  return CondensedDistanceMatrix(n, std::move(values));
}

WeightedEdgeSet::WeightedEdgeSet(std::size_t n, std::vector<WeightedEdge> edges)
    : n_(n), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.i == e.j) throw Error(ErrorCode::InvalidArgument, "self loops are not allowed");
    if (e.i >= n_ || e.j >= n_) throw Error(ErrorCode::IndexOutOfRange, "edge endpoint >= n");
    if (!(e.weight >= 0.0)) throw Error(ErrorCode::InvalidArgument, "edge weights must be >= 0");
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges_.begin(), edges_.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
      throw Error(ErrorCode::InvalidArgument, "duplicate undirected edge");
    }
  }
}

double WeightedEdgeSet::weight(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(
      edges_.begin(), edges_.end(), std::pair(i, j),
      [](const WeightedEdge& e, const std::pair<std::size_t, std::size_t>& key) {
        return std::pair(e.i, e.j) < key;
      });
  if (it == edges_.end() || it->i != i || it->j != j) return -1.0;
  return it->weight;
}

namespace {

std::vector<std::vector<std::size_t>> lists_without_self(const NeighborTable& table) {
  std::vector<std::vector<std::size_t>> out(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j : table.lists[i]) {
      if (j != i) out[i].push_back(j);
    }
  }
  return out;
}

std::size_t intersection_size(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

WeightedEdgeSet snn_similarity(const NeighborTable& table, bool require_mutual) {
  if (table.kind != NeighborKind::KNearest) {
    throw Error(ErrorCode::KindMismatch, "SNN similarity needs a k-nearest table");
  }
  const auto lists = lists_without_self(table);
  const auto pairs =
      symmetrize_knn(table, require_mutual ? SymmetrizeMode::Mutual : SymmetrizeMode::Union);
  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    edges.push_back({i, j, static_cast<double>(intersection_size(lists[i], lists[j]))});
  }
  return WeightedEdgeSet(table.size(), std::move(edges));
}

WeightedEdgeSet commonnn_similarity(const NeighborTable& table, bool count_self) {
  if (table.kind != NeighborKind::Radius) {
    throw Error(ErrorCode::KindMismatch, "CommonNN similarity needs a radius table");
  }
  auto lists = lists_without_self(table);
  std::vector<std::vector<std::size_t>> neighborhoods = lists;
  if (count_self) {
    for (std::size_t i = 0; i < neighborhoods.size(); ++i) {
      auto& hood = neighborhoods[i];
      hood.insert(std::lower_bound(hood.begin(), hood.end(), i), i);
    }
  }
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (std::size_t j : lists[i]) {
      if (j <= i) continue;
      edges.push_back(
          {i, j, static_cast<double>(intersection_size(neighborhoods[i], neighborhoods[j]))});
    }
  }
  return WeightedEdgeSet(table.size(), std::move(edges));
}

LabelVector shared_neighbor_cluster(const WeightedEdgeSet& edges, double n_c) {
  DisjointSet ds(edges.n());
  for (const auto& e : edges.edges()) {
    if (e.weight >= n_c) ds.unite(e.i, e.j);
  }
  return component_labels(ds, 2);
}

MergeHierarchy shared_neighbor_hierarchy(const WeightedEdgeSet& edges) {
  return hierarchy_from_edges(edges.n(), edges.edges(), MergeOrder::Descending);
}

GaussianMixture1D::GaussianMixture1D(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::InvalidMixture, "mixture has no components");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !(c.sd > 0.0) || !std::isfinite(c.mean)) {
      throw Error(ErrorCode::InvalidMixture, "components need weight > 0, sd > 0, finite mean");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidMixture, "weights sum to " + std::to_string(total));
  }
}

double GaussianMixture1D::density(double x) const {
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  double sum = 0.0;
  for (const auto& c : components_) {
    const double z = (x - c.mean) / c.sd;
    sum += c.weight * norm / c.sd * std::exp(-0.5 * z * z);
  }
  return sum;
}

std::vector<Interval> levelset_components_1d(const GaussianMixture1D& mix, double level,
                                             double lo, double hi, std::size_t grid_n) {
  if (level < 0.0) throw Error(ErrorCode::InvalidArgument, "level must be >= 0");
  if (grid_n < 1000) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 1000");
  if (!(lo < hi)) throw Error(ErrorCode::InvalidInterval, "domain needs lo < hi");

  auto inside = [&](double x) { return mix.density(x) >= level; };
  // Narrows [a, b] (inside(a) != inside(b)) down to the crossing point.
  auto bisect = [&](double a, double b) {
    const bool left = inside(a);
    while (b - a > 1e-8) {
      const double mid = 0.5 * (a + b);
      if (inside(mid) == left) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  std::vector<Interval> out;
  const double step = (hi - lo) / static_cast<double>(grid_n);
  double prev_x = lo;
  bool prev_in = inside(lo);
  double start = lo;
  for (std::size_t g = 1; g <= grid_n; ++g) {
    const double x = g == grid_n ? hi : lo + step * static_cast<double>(g);
    const bool in = inside(x);
    if (in && !prev_in) {
      start = bisect(prev_x, x);
    } else if (!in && prev_in) {
      out.push_back({start, bisect(prev_x, x)});
    }
    prev_x = x;
    prev_in = in;
  }
  if (prev_in) out.push_back({start, hi});
  return out;
}

}  // namespace clusterkit
