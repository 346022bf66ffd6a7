#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "clusterkit/core.hpp"

namespace clusterkit {

struct Response {
  int status = 200;
  std::string body;  // JSON
};

// In-memory sessions. Handlers are transport independent; serve() wires
// them to HTTP routes.
class SessionStore {
 public:
  // Body is raw CSV text or a JSON object: {"csv": ..., "has_header",
  // "label_column"} or {"generator": "moons"|"blobs"|"gauss1d", ...}.
  Response create_session(const std::string& body);
  // {"method": ..., "params": {...}, "seed": 0}
  Response compute(const std::string& session_id, const std::string& body);
  // {"hierarchy": key, "threshold": t, "min_size": s} or {"hierarchy": key, "count": k}
  Response cut(const std::string& session_id, const std::string& body);
  // {"decision_graph": key, "selected": [...]}
  Response peaks(const std::string& session_id, const std::string& body);
  Response artifact(const std::string& session_id, const std::string& key);

  std::size_t size() const;

 private:
  struct Session {
    explicit Session(Dataset d) : data(std::move(d)) {}
    const Dataset data;
    std::mutex mutex;
    std::map<std::string, std::string> results;      // fingerprint -> compute body
    std::map<std::string, nlohmann::json> artifacts;  // key -> artifact
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  nlohmann::json with_scores(const Session& s, const LabelVector& labels) const;

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

inline constexpr int kDefaultPort = 8710;

// HTTP front end for a SessionStore.
class HttpServer {
 public:
  explicit HttpServer(SessionStore& store);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws IoError.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called from another thread.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Binds and blocks until the server stops.
void serve(SessionStore& store, const std::string& host, int port);

}  // namespace clusterkit
