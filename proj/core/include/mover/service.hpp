#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mover/pipeline.hpp"

namespace mover {

struct ServiceOptions {
  std::vector<std::string> roots;
  std::filesystem::path runs_dir = ".mover/runs";
  /// Optional directory of static UI assets served at "/".
  std::filesystem::path static_dir;
  PipelineConfig config;
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

/// JSON API over one project: class listing, recommendation runs, applying a
/// stored plan, and recording verdicts. Reads run concurrently; apply is
/// exclusive and rebuilds the index.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Transport-independent dispatch. `query` holds decoded query parameters.
  ServiceResponse handle(const std::string& method, const std::string& path,
                         const std::map<std::string, std::string>& query, const std::string& body);

  /// Binds and serves until stop(). Returns false if binding fails.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and serves on a background thread.
  int start_background(const std::string& host);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mover
