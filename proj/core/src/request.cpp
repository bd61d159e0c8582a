#include "t3/provider/request.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"

namespace t3::provider {

using nlohmann::json;

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::kOpenAiCompatible: return "openai_compatible";
    case Backend::kAnthropic: return "anthropic";
    case Backend::kGemini: return "gemini";
    case Backend::kReplay: return "replay";
  }
  return "unknown";
}

std::string to_string(SafetyMode mode) {
  return mode == SafetyMode::kBlockNone ? "block_none" : "default";
}

Backend backend_from_string(const std::string& s) {
  if (s == "openai_compatible") return Backend::kOpenAiCompatible;
  if (s == "anthropic") return Backend::kAnthropic;
  if (s == "gemini") return Backend::kGemini;
  if (s == "replay") return Backend::kReplay;
  throw ConfigError("unknown backend \"" + s +
                    "\" (expected openai_compatible|anthropic|gemini|replay)");
}

SafetyMode safety_mode_from_string(const std::string& s) {
  if (s == "default") return SafetyMode::kDefault;
  if (s == "block_none") return SafetyMode::kBlockNone;
  throw ConfigError("unknown safety mode \"" + s + "\" (expected default|block_none)");
}

std::string canonical_request_json(const ProviderRequest& req) {
  // nlohmann::json objects serialize with sorted keys, which makes the dump
  // canonical. Absent optionals are omitted rather than serialized as null.
  // The backend is transport detail, not request identity: leaving it out is
  // what lets a transcript recorded against a live backend replay later.
  json obj;
  obj["model"] = req.model;
  obj["prompt"] = req.prompt;
  if (req.temperature) obj["temperature"] = *req.temperature;
  if (req.max_output_tokens) obj["max_output_tokens"] = *req.max_output_tokens;
  obj["safety_mode"] = to_string(req.safety_mode);
  return obj.dump();
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int digest_len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &digest_len, EVP_sha256(), nullptr) !=
      1) {
    throw Error("sha256_hex: digest failed");
  }
  std::string hex;
  hex.reserve(digest_len * 2);
  for (unsigned int i = 0; i < digest_len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string request_hash(const ProviderRequest& req) {
  return sha256_hex(canonical_request_json(req));
}

}  // namespace t3::provider
