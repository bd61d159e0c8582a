#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace t3::provider {

enum class Backend { kOpenAiCompatible, kAnthropic, kGemini, kReplay };
enum class SafetyMode { kDefault, kBlockNone };

std::string to_string(Backend backend);
std::string to_string(SafetyMode mode);
Backend backend_from_string(const std::string& s);
SafetyMode safety_mode_from_string(const std::string& s);

struct ProviderRequest {
  Backend backend = Backend::kReplay;
  std::string model;
  std::string prompt;
  std::optional<double> temperature;        // absent -> provider default
  std::optional<long> max_output_tokens;
  SafetyMode safety_mode = SafetyMode::kDefault;  // only meaningful for gemini
};

struct TokenUsage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
};

struct ProviderResponse {
  std::string raw_text;
  std::string request_hash;
  long latency_ms = 0;
  std::optional<TokenUsage> usage;
};

// Stable content hash of (backend, model, prompt, params): SHA-256 over a
// canonical key-sorted JSON serialization, identical across platforms and
// process restarts.
std::string request_hash(const ProviderRequest& req);

std::string canonical_request_json(const ProviderRequest& req);

std::string sha256_hex(std::string_view data);

}  // namespace t3::provider
