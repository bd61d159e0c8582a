#include "t3/provider/http_provider.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "t3/error.hpp"

namespace t3::provider {

using nlohmann::json;

namespace {

constexpr const char* kOpenAiDefaultBase = "https://api.openai.com/v1";
constexpr const char* kAnthropicDefaultBase = "https://api.anthropic.com";
constexpr const char* kGeminiDefaultBase = "https://generativelanguage.googleapis.com";
constexpr const char* kAnthropicVersion = "2023-06-01";
constexpr long kAnthropicDefaultMaxTokens = 4096;  // max_tokens is mandatory on this API

std::string strip_trailing_slash(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

WireRequest build_openai(const ProviderRequest& req, std::string base, const std::string& key) {
  if (base.empty()) base = kOpenAiDefaultBase;
  json body;
  body["model"] = req.model;
  body["messages"] = json::array({{{"role", "user"}, {"content", req.prompt}}});
  if (req.temperature) body["temperature"] = *req.temperature;
  if (req.max_output_tokens) body["max_tokens"] = *req.max_output_tokens;
  WireRequest wire;
  wire.url = strip_trailing_slash(base) + "/chat/completions";
  wire.headers = {{"Authorization", "Bearer " + key}, {"Content-Type", "application/json"}};
  wire.body = body.dump();
  return wire;
}

WireRequest build_anthropic(const ProviderRequest& req, std::string base, const std::string& key) {
  if (base.empty()) base = kAnthropicDefaultBase;
  json body;
  body["model"] = req.model;
  body["max_tokens"] = req.max_output_tokens.value_or(kAnthropicDefaultMaxTokens);
  body["messages"] = json::array({{{"role", "user"}, {"content", req.prompt}}});
  if (req.temperature) body["temperature"] = *req.temperature;
  WireRequest wire;
  wire.url = strip_trailing_slash(base) + "/v1/messages";
  wire.headers = {{"x-api-key", key},
                  {"anthropic-version", kAnthropicVersion},
                  {"Content-Type", "application/json"}};
  wire.body = body.dump();
  return wire;
}

WireRequest build_gemini(const ProviderRequest& req, std::string base, const std::string& key) {
  if (base.empty()) base = kGeminiDefaultBase;
  json body;
  body["contents"] = json::array({{{"parts", json::array({{{"text", req.prompt}}})}}});
  json gen_config = json::object();
  if (req.temperature) gen_config["temperature"] = *req.temperature;
  if (req.max_output_tokens) gen_config["maxOutputTokens"] = *req.max_output_tokens;
  if (!gen_config.empty()) body["generationConfig"] = gen_config;
  if (req.safety_mode == SafetyMode::kBlockNone) {
    body["safetySettings"] = json::array();
    for (const char* category : {"HARM_CATEGORY_HARASSMENT", "HARM_CATEGORY_HATE_SPEECH",
                                 "HARM_CATEGORY_SEXUALLY_EXPLICIT",
                                 "HARM_CATEGORY_DANGEROUS_CONTENT"}) {
      body["safetySettings"].push_back({{"category", category}, {"threshold", "BLOCK_NONE"}});
    }
  }
  WireRequest wire;
  wire.url = strip_trailing_slash(base) + "/v1beta/models/" + req.model +
             ":generateContent?key=" + key;
  wire.headers = {{"Content-Type", "application/json"}};
  wire.body = body.dump();
  return wire;
}

std::string error_detail(const std::string& body) {
  try {
    json obj = json::parse(body);
    if (obj.contains("error")) {
      const json& err = obj["error"];
      if (err.is_object() && err.contains("message")) return err["message"].get<std::string>();
      if (err.is_string()) return err.get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return body.size() > 400 ? body.substr(0, 400) + "..." : body;
}

std::optional<TokenUsage> parse_usage(Backend backend, const json& obj) {
  TokenUsage usage;
  switch (backend) {
    case Backend::kOpenAiCompatible:
      if (!obj.contains("usage")) return std::nullopt;
      usage.prompt_tokens = obj["usage"].value("prompt_tokens", 0L);
      usage.completion_tokens = obj["usage"].value("completion_tokens", 0L);
      return usage;
    case Backend::kAnthropic:
      if (!obj.contains("usage")) return std::nullopt;
      usage.prompt_tokens = obj["usage"].value("input_tokens", 0L);
      usage.completion_tokens = obj["usage"].value("output_tokens", 0L);
      return usage;
    case Backend::kGemini:
      if (!obj.contains("usageMetadata")) return std::nullopt;
      usage.prompt_tokens = obj["usageMetadata"].value("promptTokenCount", 0L);
      usage.completion_tokens = obj["usageMetadata"].value("candidatesTokenCount", 0L);
      return usage;
    default:
      return std::nullopt;
  }
}

}  // namespace

WireRequest build_wire_request(const ProviderRequest& req, const std::string& base_url,
                               const std::string& api_key) {
  switch (req.backend) {
    case Backend::kOpenAiCompatible:
      return build_openai(req, base_url, api_key);
    case Backend::kAnthropic:
      return build_anthropic(req, base_url, api_key);
    case Backend::kGemini:
      return build_gemini(req, base_url, api_key);
    default:
      throw ConfigError("backend " + to_string(req.backend) + " has no wire protocol");
  }
}

std::string parse_wire_response(Backend backend, const std::string& body) {
  json obj;
  try {
    obj = json::parse(body);
  } catch (const json::exception& e) {
    throw ProviderError(std::string("non-JSON response body: ") + e.what());
  }
  try {
    switch (backend) {
      case Backend::kOpenAiCompatible:
        return obj.at("choices").at(0).at("message").at("content").get<std::string>();
      case Backend::kAnthropic:
        return obj.at("content").at(0).at("text").get<std::string>();
      case Backend::kGemini:
        return obj.at("candidates").at(0).at("content").at("parts").at(0).at("text")
            .get<std::string>();
      default:
        throw ProviderError("backend " + to_string(backend) + " has no wire protocol");
    }
  } catch (const json::exception&) {
    throw ProviderError("unexpected response shape: " + error_detail(body));
  }
}

std::string credential_env_var(Backend backend) {
  switch (backend) {
    case Backend::kOpenAiCompatible:
      return "OPENAI_API_KEY";
    case Backend::kAnthropic:
      return "ANTHROPIC_API_KEY";
    case Backend::kGemini:
      return "GEMINI_API_KEY";
    default:
      return "";
  }
}

HttpProvider::HttpProvider(HttpSettings settings)
    : settings_(std::move(settings)), limiter_(settings_.requests_per_minute) {}

ProviderResponse HttpProvider::complete(const ProviderRequest& req) {
  std::string env_var = credential_env_var(req.backend);
  if (env_var.empty()) {
    throw ConfigError("backend " + to_string(req.backend) + " cannot make live calls");
  }
  const char* key = std::getenv(env_var.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("missing credential: set " + env_var);
  }

  WireRequest wire = build_wire_request(req, settings_.base_url, key);
  std::size_t path_start = wire.url.find('/', wire.url.find("://") + 3);
  std::string origin = wire.url.substr(0, path_start);
  std::string path = wire.url.substr(path_start);

  std::string last_error;
  long delay_ms = settings_.retry.initial_delay_ms;
  for (int attempt = 1; attempt <= settings_.retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      delay_ms = static_cast<long>(std::lround(delay_ms * settings_.retry.backoff_factor));
    }
    limiter_.acquire();

    httplib::Client client(origin);
    client.set_connection_timeout(settings_.timeout_s, 0);
    client.set_read_timeout(settings_.timeout_s, 0);
    httplib::Headers headers(wire.headers.begin(), wire.headers.end());

    auto started = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(path, headers, wire.body, "application/json");
    auto elapsed = std::chrono::steady_clock::now() - started;

    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw ProviderError("auth failure (HTTP " + std::to_string(res->status) +
                          "): " + error_detail(res->body));
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + error_detail(res->body);
      continue;
    }
    if (res->status != 200) {
      throw ProviderError("HTTP " + std::to_string(res->status) + ": " + error_detail(res->body));
    }

    ProviderResponse out;
    out.raw_text = parse_wire_response(req.backend, res->body);
    out.request_hash = request_hash(req);
    out.latency_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    try {
      out.usage = parse_usage(req.backend, json::parse(res->body));
    } catch (const json::exception&) {
      // body already validated by parse_wire_response; usage stays empty
    }
    return out;
  }
  throw ProviderError("request failed after " + std::to_string(settings_.retry.max_attempts) +
                      " attempts; last error: " + last_error);
}

}  // namespace t3::provider
