#include "mover/service.hpp"

#include <httplib.h>

#include <shared_mutex>
#include <thread>

#include "mover/error.hpp"

namespace mover {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownClass:
    case ErrorCode::UnknownMethod:
    case ErrorCode::MissingRun: return 404;
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyContent: return 400;
    case ErrorCode::StaleIndex:
    case ErrorCode::PlanConflict:
    case ErrorCode::Infeasible: return 409;
    case ErrorCode::ProviderUnavailable: return 503;
    default: return 500;
  }
}

ServiceResponse error_response(int status, std::string_view code, const std::string& message) {
  return ServiceResponse{status, json{{"error", code}, {"message", message}}};
}

ServiceResponse error_response(const Error& e) {
  return error_response(status_for(e.code()), to_string(e.code()), e.what());
}

json parse_body(const std::string& body) {
  json j = json::parse(body.empty() ? "{}" : body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  return j;
}

std::size_t index_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
    throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a non-negative integer");
  }
  return j.at(key).get<std::size_t>();
}

std::string string_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string() || j.at(key).get<std::string>().empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a non-empty string");
  }
  return j.at(key).get<std::string>();
}

std::size_t query_number(const std::map<std::string, std::string>& q, const std::string& key, std::size_t fallback) {
  auto it = q.find(key);
  if (it == q.end()) return fallback;
  try {
    std::size_t used = 0;
    long long v = std::stoll(it->second, &used);
    if (used != it->second.size() || v < 0) throw std::invalid_argument(key);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, key + " must be a non-negative integer");
  }
}

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  RunStore store;
  std::shared_mutex mutex;
  ProjectIndex index;
  Providers providers;
  httplib::Server server;
  std::thread thread;

  explicit Impl(ServiceOptions o) : options(std::move(o)), store(options.runs_dir) {
    std::vector<fs::path> roots(options.roots.begin(), options.roots.end());
    index = build_index(roots);
    providers = make_providers(options.config, index);
  }

  ServiceResponse classes(const std::map<std::string, std::string>& query) {
    std::size_t offset = query_number(query, "offset", 0);
    std::size_t limit = query_number(query, "limit", 50);
    std::shared_lock lock(mutex);
    json items = json::array();
    std::size_t i = 0;
    for (const auto& [name, cls] : index.classes) {
      if (i++ < offset) continue;
      if (items.size() >= limit) break;
      items.push_back({{"name", name},
                       {"methods", cls.methods.size()},
                       {"stratum", to_string(stratify(cls))},
                       {"file", cls.source_file}});
    }
    return {200, {{"total", index.classes.size()}, {"offset", offset}, {"limit", limit}, {"classes", items}}};
  }

  ServiceResponse recommend_route(const json& req) {
    std::string cls = string_field(req, "class");
    std::shared_lock lock(mutex);
    auto run = recommend(options.config, index, providers, cls);
    std::string id = store.save(run, options.config, index);
    return {200, run_summary_json(run, id)};
  }

  ServiceResponse apply_route(const json& req) {
    std::string run_id = string_field(req, "run_id");
    std::size_t i = index_field(req, "recommendation_index");
    MovePlan plan = store.load_plan(run_id, i);
    std::unique_lock lock(mutex);
    ApplyResult result = apply(plan);
    index = std::move(result.index_after);
    providers = make_providers(options.config, index);
    store.record_verdict(run_id, i, std::nullopt, true);
    return {200,
            {{"run_id", run_id},
             {"recommendation_index", i},
             {"files_changed", result.files_changed},
             {"call_sites_rewritten", result.call_sites_rewritten},
             {"reparse_ok", result.reparse_ok}}};
  }

  ServiceResponse verdict_route(const json& req) {
    std::string run_id = string_field(req, "run_id");
    std::size_t i = index_field(req, "recommendation_index");
    std::optional<int> rating;
    if (req.contains("rating") && !req.at("rating").is_null()) {
      if (!req.at("rating").is_number_integer()) throw Error(ErrorCode::InvalidArgument, "rating must be 1..6");
      rating = req.at("rating").get<int>();
    }
    std::optional<bool> applied;
    if (req.contains("applied") && !req.at("applied").is_null()) {
      if (!req.at("applied").is_boolean()) throw Error(ErrorCode::InvalidArgument, "applied must be a boolean");
      applied = req.at("applied").get<bool>();
    }
    store.record_verdict(run_id, i, rating, applied);
    json verdicts = json::array();
    for (const auto& v : store.verdicts(run_id)) {
      verdicts.push_back({{"index", v.index}, {"rating", v.rating ? json(*v.rating) : json(nullptr)},
                          {"applied", v.applied}});
    }
    return {200, {{"run_id", run_id}, {"verdicts", verdicts}}};
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    ServiceResponse r = handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto& s = impl_->server;
  s.Get("/classes", adapt);
  s.Post("/recommend", adapt);
  s.Post("/apply", adapt);
  s.Post("/verdict", adapt);
  s.Get(R"(/runs/([^/]+))", adapt);
  if (!impl_->options.static_dir.empty() && fs::is_directory(impl_->options.static_dir)) {
    s.set_mount_point("/", impl_->options.static_dir.string());
  }
}

Service::~Service() { stop(); }

ServiceResponse Service::handle(const std::string& method, const std::string& path,
                                const std::map<std::string, std::string>& query, const std::string& body) {
  try {
    if (method == "GET" && path == "/classes") return impl_->classes(query);
    if (method == "POST" && path == "/recommend") return impl_->recommend_route(parse_body(body));
    if (method == "POST" && path == "/apply") return impl_->apply_route(parse_body(body));
    if (method == "POST" && path == "/verdict") return impl_->verdict_route(parse_body(body));
    if (method == "GET" && path.rfind("/runs/", 0) == 0) return {200, impl_->store.load_record(path.substr(6))};
    return error_response(404, "NotFound", method + " " + path);
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int Service::start_background(const std::string& host) {
  int port = impl_->server.bind_to_any_port(host);
  if (port <= 0) throw Error(ErrorCode::IoError, "cannot bind " + host);
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace mover
