#include "clusterkit/graph.hpp"

#include <unordered_map>

namespace clusterkit {

LabelVector component_labels(DisjointSet& ds, std::size_t min_size,
                             const std::vector<bool>* eligible) {
  const std::size_t n = ds.size();
  std::unordered_map<std::size_t, std::size_t> eligible_count;
  for (std::size_t i = 0; i < n; ++i) {
    if (!eligible || (*eligible)[i]) ++eligible_count[ds.find(i)];
  }
  std::unordered_map<std::size_t, int> ids;
  std::vector<int> labels(n, kNoise);
  for (std::size_t i = 0; i < n; ++i) {
    if (eligible && !(*eligible)[i]) continue;
    const std::size_t root = ds.find(i);
    if (eligible_count[root] < min_size) continue;
    auto [it, inserted] = ids.try_emplace(root, static_cast<int>(ids.size()) + 1);
    labels[i] = it->second;
  }
  return canonicalize_labels(LabelVector(std::move(labels)));
}

}  // namespace clusterkit
