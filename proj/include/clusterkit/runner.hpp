#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clusterkit/core.hpp"
#include "clusterkit/hierarchy.hpp"
#include "clusterkit/prototypes.hpp"

namespace clusterkit {

using ParamMap = std::map<std::string, std::string>;

struct MethodInfo {
  std::string name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::vector<MethodInfo>& registered_methods();
std::string registered_method_names();  // comma separated

struct ClusteringResult {
  std::string method;
  ParamMap params;
  std::uint64_t seed = 0;
  LabelVector labels;
  nlohmann::json scores = nlohmann::json::object();   // vs ground truth, when present
  nlohmann::json summary = nlohmann::json::object();  // method-specific values
  std::optional<MergeHierarchy> hierarchy;
  std::optional<DecisionGraph> decision_graph;
  std::optional<CondensedTree> condensed_tree;
  std::optional<Matrix> embedding;
};

// Throws UnknownMethod, MissingParameter or InvalidArgument for bad
// configuration; module errors pass through.
ClusteringResult run_method(const Dataset& data, const std::string& method,
                            const ParamMap& params, std::uint64_t seed = 0);

nlohmann::json scores_vs_truth(const LabelVector& labels, const std::vector<int>& truth);
nlohmann::json hierarchy_json(const MergeHierarchy& h);
nlohmann::json decision_graph_json(const DecisionGraph& g);
nlohmann::json condensed_tree_json(const CondensedTree& tree);
nlohmann::json labels_json(const LabelVector& labels);
// method, params, seed, cluster counts, scores, summary.
nlohmann::json result_json(const ClusteringResult& result);

// key=value pairs; later keys win.
ParamMap parse_params(const std::vector<std::string>& pairs);

}  // namespace clusterkit
