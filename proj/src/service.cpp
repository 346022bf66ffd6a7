#include "clusterkit/service.hpp"

#include <cstdio>
#include <set>

#include <httplib.h>

#include "clusterkit/density.hpp"
#include "clusterkit/hierarchy.hpp"
#include "clusterkit/io.hpp"
#include "clusterkit/runner.hpp"

namespace clusterkit {

using nlohmann::json;

namespace {

Response error_response(int status, std::string_view code, const std::string& message) {
  return {status, json{{"error", code}, {"message", message}}.dump()};
}

Response error_response(int status, const Error& e) {
  return error_response(status, to_string(e.code()), e.what());
}

std::string fingerprint(const json& j) {
  // FNV-1a over the canonical (key-sorted) dump.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string param_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : ",") + param_string(x);
    return out;
  }
  return v.dump();
}

json parse_object(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::ParseError, "request body is not a JSON object");
  }
  return j;
}

Dataset dataset_from_generator(const json& request) {
  const std::string gen = request.at("generator").get<std::string>();
  const auto seed = request.value("seed", std::uint64_t{0});
  if (gen == "moons") {
    return gen_moons(request.value("n", std::size_t{2000}), request.value("noise_sd", 0.07), seed);
  }
  if (gen == "blobs") {
    return gen_blobs(request.at("n").get<std::size_t>(),
                     request.at("centers").get<std::vector<std::vector<double>>>(),
                     request.value("sd", 1.0), seed);
  }
  if (gen == "gauss1d") {
    return gen_gauss1d(request.at("weights").get<std::vector<double>>(),
                       request.at("means").get<std::vector<double>>(),
                       request.at("sds").get<std::vector<double>>(), request.at("n").get<std::size_t>(),
                       seed)
        .data;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown generator '" + gen + "'");
}

Dataset dataset_from_body(const std::string& body) {
  const auto first = body.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw Error(ErrorCode::EmptyFile, "empty request body");
  if (body[first] != '{') {
    CsvOptions opt;
    opt.label_column = detect_label_column(body, true);
    return parse_csv(body, opt);
  }
  const json request = parse_object(body);
  if (request.contains("generator")) return dataset_from_generator(request);
  if (!request.contains("csv")) throw Error(ErrorCode::InvalidArgument, "need csv or generator");
  const std::string text = request.at("csv").get<std::string>();
  CsvOptions opt;
  opt.has_header = request.value("has_header", true);
  if (request.contains("label_column")) {
    opt.label_column = param_string(request.at("label_column"));
  } else {
    opt.label_column = detect_label_column(text, opt.has_header);
  }
  return parse_csv(text, opt);
}

}  // namespace

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

json SessionStore::with_scores(const Session& s, const LabelVector& labels) const {
  json out = labels_json(labels);
  if (s.data.has_labels()) out["scores"] = scores_vs_truth(labels, *s.data.true_labels());
  return out;
}

Response SessionStore::create_session(const std::string& body) {
  try {
    auto session = std::make_shared<Session>(dataset_from_body(body));
    std::string id;
    {
      std::lock_guard lock(mutex_);
      id = "s" + std::to_string(next_id_++);
      sessions_.emplace(id, session);
    }
    const Dataset& d = session->data;
    std::size_t classes = 0;
    if (d.has_labels()) classes = std::set<int>(d.true_labels()->begin(), d.true_labels()->end()).size();
    return {201, json{{"id", id},
                      {"n", d.n()},
                      {"m", d.m()},
                      {"feature_names", d.feature_names()},
                      {"has_labels", d.has_labels()},
                      {"classes", classes}}
                     .dump()};
  } catch (const Error& e) {
    return error_response(400, e);
  } catch (const json::exception& e) {
    return error_response(400, "ParseError", e.what());
  }
}

Response SessionStore::compute(const std::string& session_id, const std::string& body) {
  const auto session = find(session_id);
  if (!session) return error_response(404, "NotFound", "unknown session " + session_id);
  json req;
  ParamMap params;
  std::string method;
  std::uint64_t seed = 0;
  try {
    req = parse_object(body);
    method = req.at("method").get<std::string>();
    seed = req.value("seed", std::uint64_t{0});
    if (req.contains("params")) {
      for (const auto& [k, v] : req.at("params").items()) params[k] = param_string(v);
    }
  } catch (const Error& e) {
    return error_response(400, e);
  } catch (const json::exception& e) {
    return error_response(400, "ParseError", e.what());
  }

  const std::string fp = fingerprint(json{{"method", method}, {"params", params}, {"seed", seed}});
  {
    std::lock_guard lock(session->mutex);
    const auto hit = session->results.find(fp);
    if (hit != session->results.end()) return {200, hit->second};
  }

  ClusteringResult result;
  try {
    result = run_method(session->data, method, params, seed);
  } catch (const Error& e) {
    return error_response(422, e);
  }

  json out = result_json(result);
  out["labels"] = result.labels.values();
  std::map<std::string, json> produced;
  if (result.hierarchy) produced["hierarchy-" + fp] = hierarchy_json(*result.hierarchy);
  if (result.decision_graph) produced["decision_graph-" + fp] = decision_graph_json(*result.decision_graph);
  if (result.condensed_tree) produced["condensed_tree-" + fp] = condensed_tree_json(*result.condensed_tree);
  if (result.embedding) {
    json rows = json::array();
    for (std::size_t i = 0; i < result.embedding->rows(); ++i) {
      rows.push_back(std::vector<double>(result.embedding->row(i).begin(), result.embedding->row(i).end()));
    }
    produced["embedding-" + fp] = rows;
  }
  json keys = json::object();
  for (const auto& [key, value] : produced) keys[key.substr(0, key.find('-'))] = key;
  out["artifacts"] = keys;
  // Small artifacts ride along so the UI needs one round trip.
  if (result.hierarchy) out["hierarchy"] = produced.at("hierarchy-" + fp);
  if (result.decision_graph) out["decision_graph"] = produced.at("decision_graph-" + fp);

  std::string text = out.dump();
  std::lock_guard lock(session->mutex);
  for (auto& [key, value] : produced) session->artifacts.emplace(key, std::move(value));
  session->results.emplace(fp, text);
  return {200, std::move(text)};
}

Response SessionStore::cut(const std::string& session_id, const std::string& body) {
  const auto session = find(session_id);
  if (!session) return error_response(404, "NotFound", "unknown session " + session_id);
  json req;
  try {
    req = parse_object(body);
  } catch (const Error& e) {
    return error_response(400, e);
  }
  const std::string key = req.value("hierarchy", std::string());
  MergeHierarchy h;
  {
    std::lock_guard lock(session->mutex);
    const auto it = session->artifacts.find(key);
    if (it == session->artifacts.end() || key.rfind("hierarchy-", 0) != 0) {
      return error_response(404, "NotFound", "unknown hierarchy '" + key + "'");
    }
    const json& j = it->second;
    h.n = j.at("n").get<std::size_t>();
    h.order = j.at("order") == "ascending" ? MergeOrder::Ascending : MergeOrder::Descending;
    for (const auto& row : j.at("Z")) {
      h.rows.push_back({row[0].get<std::size_t>(), row[1].get<std::size_t>(), row[2].get<double>(),
                        row[3].get<std::size_t>()});
    }
  }
  try {
    LabelVector labels;
    if (req.contains("count") == req.contains("threshold")) {
      throw Error(ErrorCode::MissingParameter, "give exactly one of count or threshold");
    }
    if (req.contains("count")) {
      labels = cut_by_count(h, req.at("count").get<std::size_t>());
    } else {
      labels = cut_by_threshold(h, req.at("threshold").get<double>(),
                                req.value("min_size", std::size_t{1}));
    }
    return {200, with_scores(*session, labels).dump()};
  } catch (const Error& e) {
    return error_response(422, e);
  } catch (const json::exception& e) {
    return error_response(422, "InvalidArgument", e.what());
  }
}

Response SessionStore::peaks(const std::string& session_id, const std::string& body) {
  const auto session = find(session_id);
  if (!session) return error_response(404, "NotFound", "unknown session " + session_id);
  json req;
  try {
    req = parse_object(body);
  } catch (const Error& e) {
    return error_response(400, e);
  }
  const std::string key = req.value("decision_graph", std::string());
  DecisionGraph g;
  {
    std::lock_guard lock(session->mutex);
    const auto it = session->artifacts.find(key);
    if (it == session->artifacts.end() || key.rfind("decision_graph-", 0) != 0) {
      return error_response(404, "NotFound", "unknown decision graph '" + key + "'");
    }
    const json& j = it->second;
    g.radius = j.at("radius").get<double>();
    g.rho = j.at("rho").get<std::vector<std::size_t>>();
    g.delta = j.at("delta").get<std::vector<double>>();
    for (const auto& d : j.at("nearest_denser")) {
      g.nearest_denser.push_back(d.is_null() ? std::nullopt : std::optional<std::size_t>(d.get<std::size_t>()));
    }
  }
  try {
    const auto selected = req.at("selected").get<std::vector<std::int64_t>>();
    std::vector<std::size_t> idx;
    for (auto v : selected) {
      if (v < 0) throw Error(ErrorCode::IndexOutOfRange, "negative index " + std::to_string(v));
      idx.push_back(static_cast<std::size_t>(v));
    }
    return {200, with_scores(*session, density_peaks_assign(g, idx)).dump()};
  } catch (const Error& e) {
    return error_response(422, e);
  } catch (const json::exception& e) {
    return error_response(422, "InvalidArgument", e.what());
  }
}

Response SessionStore::artifact(const std::string& session_id, const std::string& key) {
  const auto session = find(session_id);
  if (!session) return error_response(404, "NotFound", "unknown session " + session_id);
  std::lock_guard lock(session->mutex);
  const auto it = session->artifacts.find(key);
  if (it == session->artifacts.end()) {
    return error_response(404, "NotFound", "unknown artifact '" + key + "'");
  }
  return {200, it->second.dump()};
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(SessionStore& store) : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Post("/sessions", [&store, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, store.create_session(req.body));
  });
  server.Post(R"(/sessions/([^/]+)/compute)",
              [&store, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, store.compute(req.matches[1], req.body));
              });
  server.Post(R"(/sessions/([^/]+)/cut)", [&store, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, store.cut(req.matches[1], req.body));
  });
  server.Post(R"(/sessions/([^/]+)/peaks)",
              [&store, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, store.peaks(req.matches[1], req.body));
              });
  server.Get(R"(/sessions/([^/]+)/artifact/([^/]+))",
             [&store, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, store.artifact(req.matches[1], req.matches[2]));
             });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  auto& server = impl_->server;
  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void serve(SessionStore& store, const std::string& host, int port) {
  HttpServer server(store);
  server.bind(host, port);
  server.listen();
}

}  // namespace clusterkit
