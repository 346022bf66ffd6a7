#include "clusterkit/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "clusterkit/density.hpp"
#include "clusterkit/neighbors.hpp"
#include "clusterkit/spectral.hpp"
#include "clusterkit/validation.hpp"

namespace clusterkit {

using nlohmann::json;

const std::vector<MethodInfo>& registered_methods() {
  static const std::vector<MethodInfo> methods = {
      {"commonnn", {"r", "n_c"}, {"count_self", "metric"}},
      {"dbscan", {"r", "n_c"}, {"border", "min_cluster_size", "metric"}},
      {"density_peaks", {"r"}, {"n_peaks", "peaks", "metric"}},
      {"gmm", {"k"}, {"n_restarts", "max_iter", "tol", "cov_reg"}},
      {"grid", {"bins", "min_count"}, {}},
      {"hdbscan", {"n_c"}, {"min_cluster_size", "metric"}},
      {"jarvis_patrick", {"k", "n_c"}, {"mutual", "metric"}},
      {"kmeans", {"k"}, {"init", "n_restarts", "max_iter", "tol"}},
      {"linkage", {}, {"linkage", "k", "t", "min_size", "metric"}},
      {"spectral", {"n_clusters"}, {"affinity", "k", "mode", "sigma", "n_restarts", "metric"}},
  };
  return methods;
}

std::string registered_method_names() {
  std::string out;
  for (const auto& m : registered_methods()) out += (out.empty() ? "" : ", ") + m.name;
  return out;
}

ParamMap parse_params(const std::vector<std::string>& pairs) {
  ParamMap out;
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::InvalidArgument, "parameter '" + p + "' is not key=value");
    }
    out[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return out;
}

namespace {

class Params {
 public:
  Params(const MethodInfo& info, const ParamMap& raw) : info_(info), raw_(raw) {
    std::set<std::string> known(info.required.begin(), info.required.end());
    known.insert(info.optional.begin(), info.optional.end());
    for (const auto& [key, value] : raw) {
      if (!known.count(key)) {
        std::string list;
        for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
        throw Error(ErrorCode::InvalidArgument,
                    "method " + info.name + " has no parameter '" + key + "' (accepted: " + list + ")");
      }
    }
    for (const auto& key : info.required) {
      if (!raw.count(key)) {
        throw Error(ErrorCode::MissingParameter,
                    "method " + info.name + " requires parameter '" + key + "'");
      }
    }
  }

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback = {}) const {
    const auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }

  double num(const std::string& key, double fallback = 0.0) const {
    if (!has(key)) return fallback;
    const std::string& s = raw_.at(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, key + "='" + s + "' is not a number");
    }
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback = 0) const {
    if (!has(key)) return fallback;
    const std::string& s = raw_.at(key);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, key + "='" + s + "' is not a non-negative integer");
    }
    return v;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = raw_.at(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw Error(ErrorCode::InvalidArgument, key + "='" + s + "' is not a boolean");
  }

  std::vector<std::size_t> counts(const std::string& key) const {
    std::vector<std::size_t> out;
    std::string s = str(key);
    std::replace(s.begin(), s.end(), 'x', ',');
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
        throw Error(ErrorCode::InvalidArgument, key + "='" + str(key) + "' is not a list of integers");
      }
      out.push_back(v);
    }
    return out;
  }

  Metric metric() const { return parse_metric(str("metric", "euclidean")); }

 private:
  const MethodInfo& info_;
  const ParamMap& raw_;
};

const MethodInfo& find_method(const std::string& name) {
  for (const auto& m : registered_methods()) {
    if (m.name == name) return m;
  }
  throw Error(ErrorCode::UnknownMethod,
              "unknown method '" + name + "'; registered: " + registered_method_names());
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

void run_kmeans(const Dataset& data, const Params& p, std::uint64_t seed, ClusteringResult& out) {
  KMeansParams kp;
  kp.k = p.count("k");
  kp.init = parse_kmeans_init(p.str("init", "kmeanspp"));
  if (kp.init == KMeansInit::Given) {
    throw Error(ErrorCode::InvalidArgument, "init=given is not available from a parameter map");
  }
  kp.n_restarts = p.count("n_restarts", 10);
  kp.max_iter = p.count("max_iter", 300);
  kp.tol = p.num("tol", 1e-6);
  kp.seed = seed;
  const KMeansModel model = kmeans(data, kp);
  out.labels = model.labels;
  out.summary = {{"inertia", model.inertia},
                 {"iterations", model.iterations},
                 {"centroids", matrix_json(model.centroids)}};
}

void run_gmm(const Dataset& data, const Params& p, std::uint64_t seed, ClusteringResult& out) {
  GmmParams gp;
  gp.k = p.count("k");
  gp.n_restarts = p.count("n_restarts", 10);
  gp.max_iter = p.count("max_iter", 200);
  gp.tol = p.num("tol", 1e-7);
  gp.cov_reg = p.num("cov_reg", 1e-6);
  gp.seed = seed;
  const GmmModel model = gmm_em(data, gp);
  out.labels = canonicalize_labels(model.labels);
  json weights = json::array();
  json means = json::array();
  for (const auto& c : model.components) {
    weights.push_back(c.weight);
    means.push_back(c.mean);
  }
  out.summary = {{"log_likelihood", model.log_likelihood()},
                 {"iterations", model.iterations},
                 {"weights", weights},
                 {"means", means}};
}

void run_dbscan(const Dataset& data, const Params& p, ClusteringResult& out) {
  const std::string border = p.str("border", "first_core");
  if (border != "first_core" && border != "noise") {
    throw Error(ErrorCode::InvalidArgument, "border must be first_core or noise");
  }
  const auto table = radius_neighbors(pairwise(data, p.metric()), p.num("r"), false);
  out.labels = dbscan(table, p.count("n_c"),
                      border == "noise" ? BorderPolicy::Noise : BorderPolicy::FirstCore,
                      p.count("min_cluster_size", 1));
}

void run_hdbscan(const Dataset& data, const Params& p, ClusteringResult& out) {
  const auto mr = mutual_reachability(pairwise(data, p.metric()), p.count("n_c"));
  MergeHierarchy h = single_linkage_from_mst(minimum_spanning_tree(mr));
  CondensedTree tree = condense(h, p.count("min_cluster_size", 5));
  out.labels = select_by_persistence(tree);
  out.hierarchy = std::move(h);
  out.condensed_tree = std::move(tree);
}

void run_linkage(const Dataset& data, const Params& p, ClusteringResult& out) {
  const Linkage linkage = parse_linkage(p.str("linkage", "single"));
  MergeHierarchy h = agglomerate(pairwise(data, p.metric()), linkage);
  if (p.has("k") == p.has("t")) {
    throw Error(ErrorCode::MissingParameter, "linkage needs exactly one of k or t");
  }
  out.labels = p.has("k") ? cut_by_count(h, p.count("k"))
                          : cut_by_threshold(h, p.num("t"), p.count("min_size", 1));
  out.hierarchy = std::move(h);
}

void run_spectral(const Dataset& data, const Params& p, std::uint64_t seed, ClusteringResult& out) {
  AffinityParams ap;
  const std::string affinity = p.str("affinity", "knn");
  if (affinity == "knn") {
    ap.kind = AffinityKind::Knn;
  } else if (affinity == "gaussian") {
    ap.kind = AffinityKind::Gaussian;
  } else {
    throw Error(ErrorCode::InvalidArgument, "affinity must be knn or gaussian");
  }
  ap.k = p.count("k", 10);
  const std::string mode = p.str("mode", "union");
  if (mode != "union" && mode != "mutual") {
    throw Error(ErrorCode::InvalidArgument, "mode must be union or mutual");
  }
  ap.mode = mode == "union" ? SymmetrizeMode::Union : SymmetrizeMode::Mutual;
  ap.sigma = p.num("sigma", 1.0);
  ap.metric = p.metric();
  KMeansParams kp;
  kp.n_restarts = p.count("n_restarts", 10);
  kp.seed = seed;
  SpectralResult r = spectral_cluster(data, ap, p.count("n_clusters"), kp);
  out.labels = r.labels;
  const std::size_t shown = std::min<std::size_t>(r.eigenvalues.size(), 10);
  out.summary = {{"eigenvalues",
                  std::vector<double>(r.eigenvalues.begin(),
                                      r.eigenvalues.begin() + static_cast<std::ptrdiff_t>(shown))}};
  out.embedding = std::move(r.embedding);
}

void run_jarvis_patrick(const Dataset& data, const Params& p, ClusteringResult& out) {
  // The point itself is its own first nearest neighbour and takes one of
  // the k places.
  const auto table = knn_neighbors(pairwise(data, p.metric()), p.count("k"), true);
  const auto edges = snn_similarity(table, p.flag("mutual", true));
  out.labels = shared_neighbor_cluster(edges, p.num("n_c"));
  out.hierarchy = shared_neighbor_hierarchy(edges);
}

void run_commonnn(const Dataset& data, const Params& p, ClusteringResult& out) {
  const auto table = radius_neighbors(pairwise(data, p.metric()), p.num("r"), false);
  const auto edges = commonnn_similarity(table, p.flag("count_self", true));
  out.labels = shared_neighbor_cluster(edges, p.num("n_c"));
  out.hierarchy = shared_neighbor_hierarchy(edges);
}

void run_grid(const Dataset& data, const Params& p, ClusteringResult& out) {
  auto bins = p.counts("bins");
  if (bins.size() == 1) bins.assign(data.m(), bins.front());
  const GridHistogram grid = build_grid(data, bins);
  out.labels = grid_threshold_cluster(grid, p.count("min_count"));
  out.summary = {{"nonempty_cells", grid.nonempty_cells().size()},
                 {"total_cells", grid.total_cells()}};
}

void run_density_peaks(const Dataset& data, const Params& p, ClusteringResult& out) {
  DecisionGraph g = density_peaks_graph(pairwise(data, p.metric()), p.num("r"));
  std::vector<std::size_t> selected;
  if (p.has("peaks")) {
    for (std::size_t v : p.counts("peaks")) selected.push_back(v);
  } else {
    selected = decision_graph_standouts(g, p.count("n_peaks", 3));
  }
  out.labels = canonicalize_labels(density_peaks_assign(g, selected));
  // Keep peaks[c] as the seed of label c + 1 after relabelling.
  std::sort(selected.begin(), selected.end(), [&](std::size_t a, std::size_t b) {
    return out.labels[a] < out.labels[b];
  });
  out.summary = {{"peaks", selected}};
  out.decision_graph = std::move(g);
}

}  // namespace

ClusteringResult run_method(const Dataset& data, const std::string& method,
                            const ParamMap& params, std::uint64_t seed) {
  const MethodInfo& info = find_method(method);
  const Params p(info, params);
  ClusteringResult out;
  out.method = method;
  out.params = params;
  out.seed = seed;
  if (method == "kmeans") run_kmeans(data, p, seed, out);
  else if (method == "gmm") run_gmm(data, p, seed, out);
  else if (method == "dbscan") run_dbscan(data, p, out);
  else if (method == "hdbscan") run_hdbscan(data, p, out);
  else if (method == "linkage") run_linkage(data, p, out);
  else if (method == "spectral") run_spectral(data, p, seed, out);
  else if (method == "jarvis_patrick") run_jarvis_patrick(data, p, out);
  else if (method == "commonnn") run_commonnn(data, p, out);
  else if (method == "grid") run_grid(data, p, out);
  else if (method == "density_peaks") run_density_peaks(data, p, out);
  if (data.has_labels()) out.scores = scores_vs_truth(out.labels, *data.true_labels());
  return out;
}

json scores_vs_truth(const LabelVector& labels, const std::vector<int>& truth) {
  json s;
  if (labels.n_clusters() <= kMaxExactMatchingClusters) {
    s["match"] = match_percentage(labels, truth, false);
    s["match_ignore_noise"] = match_percentage(labels, truth, true);
  }
  const auto hcv = homogeneity_completeness_v(labels.values(), truth);
  const auto ra = rand_ari(labels.values(), truth);
  const auto mi = mi_nmi_ami(labels.values(), truth);
  s["homogeneity"] = hcv.homogeneity;
  s["completeness"] = hcv.completeness;
  s["v_measure"] = hcv.v_measure;
  s["rand"] = ra.rand;
  s["ari"] = ra.ari;
  s["mi"] = mi.mi;
  s["nmi"] = mi.nmi;
  s["ami"] = mi.ami;
  return s;
}

json hierarchy_json(const MergeHierarchy& h) {
  json z = json::array();
  for (const auto& r : h.rows) z.push_back(json::array({r.a, r.b, r.height, r.size}));
  return {{"n", h.n},
          {"order", h.order == MergeOrder::Ascending ? "ascending" : "descending"},
          {"Z", z}};
}

json decision_graph_json(const DecisionGraph& g) {
  json nearest = json::array();
  for (const auto& d : g.nearest_denser) nearest.push_back(d ? json(*d) : json(nullptr));
  return {{"radius", g.radius},
          {"rho", g.rho},
          {"delta", g.delta},
          {"nearest_denser", nearest},
          {"standouts", decision_graph_standouts(g, std::min<std::size_t>(g.size(), 10))}};
}

json condensed_tree_json(const CondensedTree& tree) {
  json nodes = json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    nodes.push_back({{"id", i},
                     {"parent", node.parent},
                     {"birth", node.birth},
                     {"death", node.death},
                     {"size", node.size},
                     {"children", node.children},
                     {"stability", tree.stability(i)}});
  }
  json fallouts = json::array();
  for (const auto& f : tree.fallouts) fallouts.push_back(json::array({f.point, f.node, f.lambda}));
  return {{"n_points", tree.n_points},
          {"min_cluster_size", tree.min_cluster_size},
          {"nodes", nodes},
          {"fallouts", fallouts}};
}

json labels_json(const LabelVector& labels) {
  return {{"labels", labels.values()},
          {"n_clusters", labels.n_clusters()},
          {"noise", labels.noise_count()}};
}

json result_json(const ClusteringResult& r) {
  json out = labels_json(r.labels);
  out.erase("labels");
  out["method"] = r.method;
  out["params"] = r.params;
  out["seed"] = r.seed;
  out["scores"] = r.scores;
  out["summary"] = r.summary;
  json artifacts = json::array();
  if (r.hierarchy) artifacts.push_back("hierarchy");
  if (r.decision_graph) artifacts.push_back("decision_graph");
  if (r.condensed_tree) artifacts.push_back("condensed_tree");
  if (r.embedding) artifacts.push_back("embedding");
  out["artifacts"] = artifacts;
  return out;
}

}  // namespace clusterkit
