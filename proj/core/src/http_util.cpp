#include "http_util.hpp"

#include <httplib.h>

#include "mover/error.hpp"

namespace mover::detail {

nlohmann::json post_json(const std::string& url, const std::string& api_key, const nlohmann::json& body,
                         std::chrono::seconds timeout) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::ProviderUnavailable, "endpoint URL has no scheme: " + url);
  }
  auto path_begin = url.find('/', scheme_end + 3);
  std::string origin = path_begin == std::string::npos ? url : url.substr(0, path_begin);
  std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::ProviderUnavailable, url + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::ProviderUnavailable, url + " answered HTTP " + std::to_string(res->status));
  }
  auto parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded()) {
    throw Error(ErrorCode::ProviderUnavailable, url + " returned a body that is not JSON");
  }
  return parsed;
}

}  // namespace mover::detail
