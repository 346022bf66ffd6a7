#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clusterkit/io.hpp"
#include "clusterkit/metrics.hpp"
#include "clusterkit/preprocess.hpp"
#include "clusterkit/prototypes.hpp"
#include "clusterkit/runner.hpp"
#include "clusterkit/service.hpp"
#include "clusterkit/validation.hpp"

namespace fs = std::filesystem;
using namespace clusterkit;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct Options {
  std::string input;
  std::string method;
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  std::string out;
  bool no_header = false;
  std::string label_column;
  std::string labels;
  std::string sweep;
  bool timings = false;
  std::string host = "127.0.0.1";
  int port = kDefaultPort;
};

Dataset load(const Options& o) {
  if (o.input.empty()) throw Error(ErrorCode::MissingParameter, "--input is required");
  const std::string text = read_file(o.input);
  CsvOptions csv;
  csv.has_header = !o.no_header;
  csv.label_column = o.label_column.empty() ? detect_label_column(text, csv.has_header)
                                            : std::optional<std::string>(o.label_column);
  return parse_csv(text, csv);
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

void emit(const Options& o, const std::string& file, const std::string& contents) {
  if (o.out.empty()) {
    std::cout << contents;
    return;
  }
  fs::create_directories(o.out);
  write_file((fs::path(o.out) / file).string(), contents);
}

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "'" + s + "' is not a list of numbers");
    }
  }
  return out;
}

std::string need(const ParamMap& p, const std::string& key) {
  const auto it = p.find(key);
  if (it == p.end()) throw Error(ErrorCode::MissingParameter, "parameter '" + key + "' is required");
  return it->second;
}

std::string get(const ParamMap& p, const std::string& key, const std::string& fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int cmd_gen(const Options& o) {
  const ParamMap p = parse_params(o.params);
  Dataset d = [&] {
    if (o.method == "moons") {
      return gen_moons(std::stoul(get(p, "n", "2000")), std::stod(get(p, "noise_sd", "0.07")), o.seed);
    }
    if (o.method == "blobs") {
      std::vector<std::vector<double>> centers;
      std::istringstream in(need(p, "centers"));
      std::string c;
      while (std::getline(in, c, ';')) centers.push_back(numbers(c));
      return gen_blobs(std::stoul(need(p, "n")), centers, std::stod(get(p, "sd", "1")), o.seed);
    }
    if (o.method == "gauss1d") {
      return gen_gauss1d(numbers(need(p, "weights")), numbers(need(p, "means")),
                         numbers(need(p, "sds")), std::stoul(need(p, "n")), o.seed)
          .data;
    }
    throw Error(ErrorCode::UnknownMethod,
                "unknown generator '" + o.method + "'; available: blobs, gauss1d, moons");
  }();
  emit(o, "data.csv", dataset_csv(d));
  return 0;
}

int cmd_preprocess(const Options& o) {
  const Dataset d = load(o);
  const ParamMap p = parse_params(o.params);
  std::pair<Dataset, ScalerParams> scaled = [&] {
    if (o.method == "zscore") return z_scale(d);
    if (o.method == "minmax") {
      return min_max_scale(d, std::stod(get(p, "lo", "0")), std::stod(get(p, "hi", "1")));
    }
    if (o.method == "maxabs") return max_abs_scale(d);
    throw Error(ErrorCode::UnknownMethod,
                "unknown scaler '" + o.method + "'; available: maxabs, minmax, zscore");
  }();
  emit(o, "data.csv", dataset_csv(scaled.first));
  return 0;
}

int cmd_cluster(const Options& o) {
  const Dataset d = load(o);
  const auto start = std::chrono::steady_clock::now();
  const ClusteringResult r = run_method(d, o.method, parse_params(o.params), o.seed);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json result = result_json(r);
  if (o.timings) result["timings"] = {{"run_seconds", seconds}};
  if (o.out.empty()) {
    std::cout << pretty(result);
    return 0;
  }
  emit(o, "labels.csv", labels_csv(r.labels));
  emit(o, "result.json", pretty(result));
  if (r.hierarchy) emit(o, "hierarchy.json", pretty(hierarchy_json(*r.hierarchy)));
  if (r.decision_graph) emit(o, "decision_graph.json", pretty(decision_graph_json(*r.decision_graph)));
  if (r.condensed_tree) emit(o, "condensed_tree.json", pretty(condensed_tree_json(*r.condensed_tree)));
  if (r.embedding) {
    std::vector<std::string> header;
    for (std::size_t j = 0; j < r.embedding->cols(); ++j) header.push_back("v" + std::to_string(j));
    emit(o, "embedding.csv", matrix_csv(*r.embedding, header));
  }
  return 0;
}

int cmd_hierarchy(const Options& o) {
  const Dataset d = load(o);
  ParamMap p = parse_params(o.params);
  const std::string method = o.method.empty() ? "linkage" : o.method;
  // The tree does not depend on the cut; pick a trivial one.
  if (method == "linkage" && !p.count("k") && !p.count("t")) p["k"] = "1";
  const ClusteringResult r = run_method(d, method, p, o.seed);
  if (!r.hierarchy) {
    throw Error(ErrorCode::InvalidArgument, "method " + method + " does not build a hierarchy");
  }
  emit(o, "hierarchy.json", pretty(hierarchy_json(*r.hierarchy)));
  if (r.condensed_tree && !o.out.empty()) {
    emit(o, "condensed_tree.json", pretty(condensed_tree_json(*r.condensed_tree)));
  }
  return 0;
}

json internal_scores(const Dataset& d, const LabelVector& labels) {
  json s = json::object();
  if (labels.noise_count() == 0) s["inertia"] = inertia(d, labels);
  if (labels.n_clusters() >= 2) {
    s["silhouette"] = silhouette(pairwise(d, Metric::Euclidean), labels).mean;
    if (labels.noise_count() == 0 && labels.n_clusters() < d.n()) {
      s["calinski_harabasz"] = calinski_harabasz(d, labels);
    }
  }
  return s;
}

LabelVector read_labels(const std::string& path) {
  const Dataset t = parse_csv(read_file(path), {});
  std::vector<int> labels;
  const std::size_t col = t.m() - 1;
  for (std::size_t i = 0; i < t.n(); ++i) labels.push_back(static_cast<int>(t.points()(i, col)));
  return LabelVector(labels);
}

int cmd_validate(const Options& o) {
  const Dataset d = load(o);
  if (!o.labels.empty()) {
    const LabelVector labels = read_labels(o.labels);
    if (labels.size() != d.n()) throw Error(ErrorCode::LabelLengthMismatch, "label count differs from n");
    json out = internal_scores(d, labels);
    if (d.has_labels()) out["external"] = scores_vs_truth(labels, *d.true_labels());
    emit(o, "scores.json", pretty(out));
    return 0;
  }
  // k-means sweep, e.g. --sweep 2:8
  const auto colon = o.sweep.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::MissingParameter, "validate needs --labels or --sweep lo:hi");
  }
  const std::size_t lo = std::stoul(o.sweep.substr(0, colon));
  const std::size_t hi = std::stoul(o.sweep.substr(colon + 1));
  if (lo < 2 || hi < lo) throw Error(ErrorCode::KOutOfRange, "sweep needs 2 <= lo <= hi");
  json rows = json::array();
  std::vector<std::size_t> ks;
  std::vector<double> inertias;
  const auto dist = pairwise(d, Metric::Euclidean);
  for (std::size_t k = lo; k <= hi; ++k) {
    ParamMap p = parse_params(o.params);
    p["k"] = std::to_string(k);
    const ClusteringResult r = run_method(d, "kmeans", p, o.seed);
    json row = {{"k", k},
                {"inertia", r.summary.at("inertia")},
                {"silhouette", silhouette(dist, r.labels).mean},
                {"calinski_harabasz", calinski_harabasz(d, r.labels)}};
    if (d.has_labels()) row["external"] = r.scores;
    ks.push_back(k);
    inertias.push_back(r.summary.at("inertia").get<double>());
    rows.push_back(row);
  }
  json out = {{"sweep", rows}};
  if (auto elbow = elbow_hint(ks, inertias)) out["elbow_hint"] = *elbow;
  emit(o, "sweep.json", pretty(out));
  return 0;
}

int cmd_serve(const Options& o) {
  SessionStore store;
  std::cerr << "listening on " << o.host << ":" << o.port << "\n";
  serve(store, o.host, o.port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clusterkit: clustering toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool input) {
    if (input) {
      sub->add_option("--input", o.input, "CSV dataset");
      sub->add_flag("--no-header", o.no_header, "first row is data");
      sub->add_option("--label-column", o.label_column, "class column (name or index)");
    }
    sub->add_option("--param", o.params, "key=value, repeatable");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "output directory (stdout when omitted)");
  };

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen->add_option("generator,--method", o.method, "moons, blobs or gauss1d")->required();
  add_common(gen, false);

  auto* pre = app.add_subcommand("preprocess", "scale features");
  pre->add_option("--method", o.method, "zscore, minmax or maxabs")->required();
  add_common(pre, true);

  auto* cluster = app.add_subcommand("cluster", "run a clustering method");
  cluster->add_option("--method", o.method, registered_method_names())->required();
  cluster->add_flag("--timings", o.timings, "add wall-clock timings to result.json");
  add_common(cluster, true);

  auto* hier = app.add_subcommand("hierarchy", "emit a merge hierarchy");
  hier->add_option("--method", o.method, "linkage, hdbscan, jarvis_patrick or commonnn");
  add_common(hier, true);

  auto* val = app.add_subcommand("validate", "score labels or sweep k-means over k");
  val->add_option("--labels", o.labels, "labels.csv to score");
  val->add_option("--sweep", o.sweep, "k range lo:hi for a k-means sweep");
  add_common(val, true);

  auto* srv = app.add_subcommand("serve", "start the HTTP service");
  srv->add_option("--port", o.port, "port")->capture_default_str();
  srv->add_option("--host", o.host, "bind address")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*pre) return cmd_preprocess(o);
    if (*cluster) return cmd_cluster(o);
    if (*hier) return cmd_hierarchy(o);
    if (*val) return cmd_validate(o);
    if (*srv) return cmd_serve(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid number: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: number out of range: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
