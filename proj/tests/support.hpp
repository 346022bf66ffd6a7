#pragma once

// Shared fixtures and brute-force oracles for the test binaries. Nothing
// here calls into the library's own algorithms beyond data containers.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "clusterkit/core.hpp"
#include "clusterkit/io.hpp"

namespace testsupport {

// Absolute tolerance check.
inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline clusterkit::Dataset iris() {
  clusterkit::CsvOptions opt;
  opt.label_column = "species";
  return clusterkit::ingest_csv(std::string(CLUSTERKIT_DATA_DIR) + "/iris.csv", opt);
}

inline std::vector<std::vector<double>> random_rows(std::mt19937_64& rng, std::size_t n,
                                                    std::size_t m, double lo = 0.0,
                                                    double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::vector<double>> rows(n, std::vector<double>(m));
  for (auto& r : rows) {
    for (double& v : r) v = u(rng);
  }
  return rows;
}

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Co-membership relation, the label-free description of a partition.
// Noise points (label 0) are never co-members of anything.
inline std::vector<std::vector<bool>> comembership(const std::vector<int>& labels) {
  const std::size_t n = labels.size();
  std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = labels[i] != 0 && labels[i] == labels[j];
  }
  return out;
}

inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] == 0) != (b[i] == 0)) return false;
  }
  return comembership(a) == comembership(b);
}

// Connected components by breadth-first search over an adjacency list.
// Components smaller than min_size, and vertices not in `keep`, get 0.
inline std::vector<int> bfs_components(const std::vector<std::vector<std::size_t>>& adj,
                                       std::size_t min_size = 1,
                                       const std::vector<bool>* keep = nullptr) {
  const std::size_t n = adj.size();
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != -1 || (keep && !(*keep)[s])) continue;
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = next;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t w : adj[v]) {
        if (comp[w] != -1 || (keep && !(*keep)[w])) continue;
        comp[w] = next;
        q.push(w);
      }
    }
    ++next;
  }
  std::map<int, std::size_t> sizes;
  for (int c : comp) {
    if (c >= 0) ++sizes[c];
  }
  std::vector<int> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] >= 0 && sizes[comp[i]] >= min_size) out[i] = comp[i] + 1;
  }
  return out;
}

// Best agreement over injective cluster -> class maps by trying every
// permutation of the class list (clusters padded with "unmapped").
inline double brute_force_match(const std::vector<int>& pred, const std::vector<int>& truth,
                                bool ignore_noise) {
  std::vector<int> clusters;
  std::vector<int> classes;
  for (int p : pred) {
    if (p != 0 && std::find(clusters.begin(), clusters.end(), p) == clusters.end()) clusters.push_back(p);
  }
  for (int t : truth) {
    if (std::find(classes.begin(), classes.end(), t) == classes.end()) classes.push_back(t);
  }
  // Slots: every class plus one "unmapped" marker per cluster.
  std::vector<int> slots = classes;
  for (std::size_t i = 0; i < clusters.size(); ++i) slots.push_back(-1 - static_cast<int>(i));
  std::sort(slots.begin(), slots.end());
  std::size_t denom = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) denom += !(ignore_noise && pred[i] == 0);
  if (denom == 0) return 0.0;
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == 0) continue;
      const auto c = static_cast<std::size_t>(
          std::find(clusters.begin(), clusters.end(), pred[i]) - clusters.begin());
      hits += slots[c] == truth[i];
    }
    best = std::max(best, hits);
  } while (std::next_permutation(slots.begin(), slots.end()));
  return static_cast<double>(best) / static_cast<double>(denom);
}

inline std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k, bool noise = false) {
  std::uniform_int_distribution<int> u(noise ? 0 : 1, k);
  std::vector<int> out(n);
  for (int& v : out) v = u(rng);
  return out;
}

}  // namespace testsupport
