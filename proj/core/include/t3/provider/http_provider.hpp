#pragma once

#include <string>
#include <utility>
#include <vector>

#include "t3/provider/provider.hpp"

namespace t3::provider {

struct RetryPolicy {
  int max_attempts = 3;
  long initial_delay_ms = 500;
  double backoff_factor = 2.0;
};

struct HttpSettings {
  std::string base_url;  // empty -> backend default endpoint
  double requests_per_minute = 0.0;
  long timeout_s = 120;
  RetryPolicy retry;
};

// Wire-level request a backend adapter would send; exposed so tests can
// inspect bodies without any network traffic.
struct WireRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;  // JSON
};

WireRequest build_wire_request(const ProviderRequest& req, const std::string& base_url,
                               const std::string& api_key);

// Extracts the completion text from a backend's JSON response body.
std::string parse_wire_response(Backend backend, const std::string& body);

// Credential environment variable consulted for a backend.
std::string credential_env_var(Backend backend);

// Live HTTP provider for the OpenAI-compatible, Anthropic and Gemini wire
// protocols. Transient failures (HTTP 429/5xx, transport errors) retry with
// bounded exponential backoff; auth failures do not retry.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpSettings settings);
  ProviderResponse complete(const ProviderRequest& req) override;

 private:
  HttpSettings settings_;
  RateLimiter limiter_;
};

}  // namespace t3::provider
