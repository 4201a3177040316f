#pragma once

#include <chrono>
#include <nlohmann/json.hpp>
#include <string>

namespace mover::detail {

/// POSTs a JSON body with an optional bearer token. Transport failures,
/// non-2xx statuses and non-JSON bodies raise ProviderUnavailable.
nlohmann::json post_json(const std::string& url, const std::string& api_key, const nlohmann::json& body,
                         std::chrono::seconds timeout);

}  // namespace mover::detail
