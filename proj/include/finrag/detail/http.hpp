#pragma once

// Shared JSON-over-HTTP plumbing for the remote providers.

#include <chrono>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "finrag/error.hpp"

namespace finrag::detail {

struct EndpointParts {
    std::string base;  // scheme://host[:port]
    std::string path;  // leading "/", "/" when the endpoint has no path
};

inline EndpointParts split_endpoint(const std::string& endpoint) {
    const std::size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos) {
        throw ValidationError("endpoint must include a scheme: " + endpoint);
    }
    const std::size_t slash = endpoint.find('/', scheme + 3);
    if (slash == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

// POSTs `body` as JSON and returns the parsed JSON response. Transport
// failures and non-2xx statuses are retried with exponential backoff;
// unparsable response bodies are not.
inline nlohmann::json post_json(const std::string& endpoint, const nlohmann::json& body,
                                std::chrono::milliseconds timeout, int attempts = 3) {
    const EndpointParts parts = split_endpoint(endpoint);
    const std::string payload = body.dump();
    std::string last_failure = "no attempt made";

    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100) * (1 << (attempt - 1)));
        }
        httplib::Client client(parts.base);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        httplib::Result res = client.Post(parts.path, payload, "application/json");
        if (!res) {
            last_failure = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_failure = "status " + std::to_string(res->status);
            continue;
        }
        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded()) {
            throw ProtocolError("non-JSON response from " + endpoint);
        }
        return parsed;
    }
    throw ProviderError("POST " + endpoint + " failed after " + std::to_string(attempts) +
                        " attempts (" + last_failure + ")");
}

}  // namespace finrag::detail
