#include "clusterkit/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "clusterkit/graph.hpp"

namespace clusterkit {

void MergeHierarchy::validate() const {
  if (rows.size() + 1 > std::max<std::size_t>(n, 1)) {
    throw Error(ErrorCode::InvalidArgument, "hierarchy has more than n - 1 rows");
  }
  std::vector<std::size_t> sizes(n + rows.size(), 1);
  std::vector<bool> used(n + rows.size(), false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t id = n + r;
    if (row.a >= id || row.b >= id || row.a == row.b) {
      throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(r) + " has invalid children");
    }
    if (used[row.a] || used[row.b]) {
      throw Error(ErrorCode::InvalidArgument,
                  "row " + std::to_string(r) + " reuses an already merged cluster");
    }
    used[row.a] = used[row.b] = true;
    sizes[id] = sizes[row.a] + sizes[row.b];
    if (row.size != sizes[id]) {
      throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(r) + " has wrong size");
    }
  }
}

std::vector<std::size_t> MergeHierarchy::leaves(std::size_t c) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{c};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    if (id < n) {
      out.push_back(id);
    } else {
      const auto& row = rows.at(id - n);
      stack.push_back(row.b);
      stack.push_back(row.a);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double SpanningTree::total_weight() const {
  double sum = 0.0;
  for (const auto& e : edges) sum += e.weight;
  return sum;
}

Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::Single;
  if (name == "complete") return Linkage::Complete;
  if (name == "average") return Linkage::Average;
  throw Error(ErrorCode::InvalidArgument, "unknown linkage '" + std::string(name) + "'");
}

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
  }
  return "single";
}

MergeHierarchy agglomerate(const CondensedDistanceMatrix& distances, Linkage linkage) {
  const std::size_t n = distances.n();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "agglomeration needs at least 2 points");

  Matrix d = distances.to_square();
  std::vector<bool> active(n, true);
  std::vector<std::size_t> slot_id(n);
  std::vector<std::size_t> slot_size(n, 1);
  for (std::size_t i = 0; i < n; ++i) slot_id[i] = i;

  MergeHierarchy h;
  h.n = n;
  h.rows.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0;
    std::size_t bj = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (!found || d(i, j) < best) {
          best = d(i, j);
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    const double ni = static_cast<double>(slot_size[bi]);
    const double nj = static_cast<double>(slot_size[bj]);
    double alpha_i = 0.5;
    double alpha_j = 0.5;
    double gamma = 0.0;
    switch (linkage) {
      case Linkage::Single: gamma = -0.5; break;
      case Linkage::Complete: gamma = 0.5; break;
      case Linkage::Average:
        alpha_i = ni / (ni + nj);
        alpha_j = nj / (ni + nj);
        break;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double dki = d(k, bi);
      const double dkj = d(k, bj);
      double updated = alpha_i * dki + alpha_j * dkj + gamma * std::abs(dki - dkj);
      // With gamma = -+1/2 the update is exactly min/max; take the operand
      // itself so heights stay bit-equal to input distances.
      if (gamma < 0.0) updated = std::min(dki, dkj);
      if (gamma > 0.0) updated = std::max(dki, dkj);
      d(k, bi) = d(bi, k) = updated;
    }
    const std::size_t a = std::min(slot_id[bi], slot_id[bj]);
    const std::size_t b = std::max(slot_id[bi], slot_id[bj]);
    h.rows.push_back({a, b, best, slot_size[bi] + slot_size[bj]});
    slot_id[bi] = n + step;
    slot_size[bi] += slot_size[bj];
    active[bj] = false;
  }
  return h;
}

SpanningTree minimum_spanning_tree(std::size_t n,
                                   const std::function<double(std::size_t, std::size_t)>& weight) {
  SpanningTree tree;
  tree.n = n;
  if (n < 2) return tree;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, kInf);
  std::vector<std::size_t> parent(n, 0);
  auto pair_less = [](std::size_t u1, std::size_t v1, std::size_t u2, std::size_t v2) {
    const auto p1 = std::minmax(u1, v1);
    const auto p2 = std::minmax(u2, v2);
    return p1 < p2;
  };

  std::size_t current = 0;
  in_tree[0] = true;
  tree.edges.reserve(n - 1);
  for (std::size_t added = 1; added < n; ++added) {
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double w = weight(current, v);
      if (w < best[v] || (w == best[v] && pair_less(current, v, parent[v], v))) {
        best[v] = w;
        parent[v] = current;
      }
    }
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (next == n || best[v] < best[next] ||
          (best[v] == best[next] && pair_less(parent[v], v, parent[next], next))) {
        next = v;
      }
    }
    in_tree[next] = true;
    const auto [i, j] = std::minmax(parent[next], next);
    tree.edges.push_back({i, j, best[next]});
    current = next;
  }
  return tree;
}

SpanningTree minimum_spanning_tree(const CondensedDistanceMatrix& distances) {
  return minimum_spanning_tree(distances.n(),
                               [&](std::size_t i, std::size_t j) { return distances(i, j); });
}

MergeHierarchy hierarchy_from_edges(std::size_t n, std::vector<WeightedEdge> edges,
                                    MergeOrder order) {
  for (auto& e : edges) {
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end(), [order](const WeightedEdge& x, const WeightedEdge& y) {
    if (x.weight != y.weight) {
      return order == MergeOrder::Ascending ? x.weight < y.weight : x.weight > y.weight;
    }
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });

  MergeHierarchy h;
  h.n = n;
  h.order = order;
  DisjointSet ds(n);
  std::vector<std::size_t> cluster_of_root(n);
  std::vector<std::size_t> size_of_root(n, 1);
  for (std::size_t i = 0; i < n; ++i) cluster_of_root[i] = i;
  for (const auto& e : edges) {
    if (e.i == e.j) continue;
    const std::size_t ri = ds.find(e.i);
    const std::size_t rj = ds.find(e.j);
    if (ri == rj) continue;
    const std::size_t ci = cluster_of_root[ri];
    const std::size_t cj = cluster_of_root[rj];
    const std::size_t size = size_of_root[ri] + size_of_root[rj];
    h.rows.push_back({std::min(ci, cj), std::max(ci, cj), e.weight, size});
    ds.unite(ri, rj);
    const std::size_t root = ds.find(ri);
    cluster_of_root[root] = n + h.rows.size() - 1;
    size_of_root[root] = size;
    if (h.rows.size() + 1 == n) break;
  }
  return h;
}

MergeHierarchy single_linkage_from_mst(const SpanningTree& tree) {
  return hierarchy_from_edges(tree.n, tree.edges, MergeOrder::Ascending);
}

namespace {

// Representative leaf of every cluster id in h.
std::vector<std::size_t> representatives(const MergeHierarchy& h) {
  std::vector<std::size_t> rep(h.n + h.rows.size());
  for (std::size_t i = 0; i < h.n; ++i) rep[i] = i;
  for (std::size_t r = 0; r < h.rows.size(); ++r) rep[h.n + r] = rep[h.rows[r].a];
  return rep;
}

}  // namespace

LabelVector cut_by_threshold(const MergeHierarchy& h, double t, std::size_t min_size) {
  const auto rep = representatives(h);
  DisjointSet ds(h.n);
  for (const auto& row : h.rows) {
    const bool apply = h.order == MergeOrder::Ascending ? row.height <= t : row.height >= t;
    if (apply) ds.unite(rep[row.a], rep[row.b]);
  }
  return component_labels(ds, std::max<std::size_t>(min_size, 1));
}

LabelVector cut_by_count(const MergeHierarchy& h, std::size_t k) {
  if (k < 1 || k > h.n || h.n - k > h.rows.size()) {
    throw Error(ErrorCode::KOutOfRange, "cannot cut " + std::to_string(h.n) + " points with " +
                                            std::to_string(h.rows.size()) + " merges into " +
                                            std::to_string(k) + " clusters");
  }
  const auto rep = representatives(h);
  DisjointSet ds(h.n);
  for (std::size_t r = 0; r < h.n - k; ++r) ds.unite(rep[h.rows[r].a], rep[h.rows[r].b]);
  return component_labels(ds);
}

double CondensedTree::stability(std::size_t node) const {
  const auto& self = nodes.at(node);
  double sum = 0.0;
  for (const auto& f : fallouts) {
    if (f.node == node) sum += f.lambda - self.birth;
  }
  for (std::size_t c : self.children) {
    sum += static_cast<double>(nodes[c].size) * (nodes[c].birth - self.birth);
  }
  return sum;
}

CondensedTree condense(const MergeHierarchy& h, std::size_t min_cluster_size,
                       bool heights_are_distances) {
  if (min_cluster_size < 2) {
    throw Error(ErrorCode::InvalidArgument, "min_cluster_size must be >= 2");
  }
  if (!h.complete()) {
    throw Error(ErrorCode::InvalidArgument, "condense needs a complete hierarchy");
  }
  h.validate();

  double max_lambda = 0.0;
  for (const auto& row : h.rows) {
    if (heights_are_distances) {
      if (row.height > 0.0) max_lambda = std::max(max_lambda, 1.0 / row.height);
    } else {
      max_lambda = std::max(max_lambda, row.height);
    }
  }
  if (max_lambda == 0.0) max_lambda = 1.0;
  auto lambda_of = [&](double height) {
    if (!heights_are_distances) return height;
    return height > 0.0 ? 1.0 / height : max_lambda;
  };

  std::vector<std::size_t> sizes(h.n + h.rows.size(), 1);
  for (std::size_t r = 0; r < h.rows.size(); ++r) sizes[h.n + r] = h.rows[r].size;

  CondensedTree tree;
  tree.n_points = h.n;
  tree.min_cluster_size = min_cluster_size;
  tree.nodes.push_back({-1, 0.0, 0.0, h.n, {}});

  auto fall_out = [&](std::size_t cluster_id, std::size_t node, double lambda) {
    for (std::size_t p : h.leaves(cluster_id)) tree.fallouts.push_back({p, node, lambda});
    tree.nodes[node].death = std::max(tree.nodes[node].death, lambda);
  };

  if (h.n == 1) {
    tree.fallouts.push_back({0, 0, 0.0});
    return tree;
  }

  struct Item {
    std::size_t cluster_id;
    std::size_t node;
  };
  std::vector<Item> stack{{h.n + h.rows.size() - 1, 0}};
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    if (item.cluster_id < h.n) {
      // A single point still attached to its node; only reachable when the
      // last merge of a chain leaves it alone.
      fall_out(item.cluster_id, item.node, tree.nodes[item.node].death);
      continue;
    }
    const auto& row = h.rows[item.cluster_id - h.n];
    const double lambda = lambda_of(row.height);
    const bool big_a = sizes[row.a] >= min_cluster_size;
    const bool big_b = sizes[row.b] >= min_cluster_size;
    if (big_a && big_b) {
      tree.nodes[item.node].death = lambda;
      for (std::size_t child : {row.a, row.b}) {
        const std::size_t idx = tree.nodes.size();
        tree.nodes.push_back({static_cast<int>(item.node), lambda, lambda, sizes[child], {}});
        tree.nodes[item.node].children.push_back(idx);
        stack.push_back({child, idx});
      }
    } else if (!big_a && !big_b) {
      fall_out(row.a, item.node, lambda);
      fall_out(row.b, item.node, lambda);
    } else {
      const std::size_t small = big_a ? row.b : row.a;
      const std::size_t big = big_a ? row.a : row.b;
      fall_out(small, item.node, lambda);
      stack.push_back({big, item.node});
    }
  }
  std::sort(tree.fallouts.begin(), tree.fallouts.end(),
            [](const PointFallout& x, const PointFallout& y) { return x.point < y.point; });
  return tree;
}

LabelVector select_by_persistence(const CondensedTree& tree) {
  const std::size_t count = tree.nodes.size();
  std::vector<double> own(count);
  for (std::size_t v = 0; v < count; ++v) own[v] = tree.stability(v);

  std::vector<bool> selected(count, false);
  std::vector<double> best(count, 0.0);
  // Children always have larger indices than their parent.
  for (std::size_t v = count; v-- > 0;) {
    const auto& node = tree.nodes[v];
    if (node.children.empty()) {
      selected[v] = true;
      best[v] = own[v];
      continue;
    }
    double children_sum = 0.0;
    for (std::size_t c : node.children) children_sum += best[c];
    if (v != 0 && own[v] > children_sum) {
      selected[v] = true;
      best[v] = own[v];
    } else {
      best[v] = children_sum;
    }
  }

  // A selected node claims every point that leaves it or any descendant;
  // walking top-down lets the first selected ancestor win.
  std::vector<int> owner(count, -1);
  int next_label = 0;
  for (std::size_t v = 0; v < count; ++v) {
    const int parent = tree.nodes[v].parent;
    if (parent >= 0 && owner[static_cast<std::size_t>(parent)] >= 0) {
      owner[v] = owner[static_cast<std::size_t>(parent)];
    } else if (selected[v]) {
      owner[v] = ++next_label;
    }
  }
  std::vector<int> labels(tree.n_points, kNoise);
  for (const auto& f : tree.fallouts) {
    if (owner[f.node] > 0) labels[f.point] = owner[f.node];
  }
  return canonicalize_labels(LabelVector(std::move(labels)));
}

}  // namespace clusterkit
