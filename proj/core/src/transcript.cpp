#include "t3/provider/transcript.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"
#include "t3/provider/request.hpp"

namespace t3::provider {

using nlohmann::json;

namespace {

json response_to_json(const ProviderResponse& resp) {
  json obj;
  obj["raw_text"] = resp.raw_text;
  obj["latency_ms"] = resp.latency_ms;
  if (resp.usage) {
    obj["usage"] = {{"prompt_tokens", resp.usage->prompt_tokens},
                    {"completion_tokens", resp.usage->completion_tokens}};
  }
  return obj;
}

ProviderResponse response_from_json(const json& obj, const std::string& hash) {
  ProviderResponse resp;
  resp.raw_text = obj.at("raw_text").get<std::string>();
  resp.request_hash = hash;
  resp.latency_ms = obj.value("latency_ms", 0L);
  if (obj.contains("usage")) {
    TokenUsage usage;
    usage.prompt_tokens = obj["usage"].value("prompt_tokens", 0L);
    usage.completion_tokens = obj["usage"].value("completion_tokens", 0L);
    resp.usage = usage;
  }
  return resp;
}

}  // namespace

void TranscriptStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transcript: " + path);
  std::lock_guard<std::mutex> lock(mutex_);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
      std::string hash = obj.at("hash").get<std::string>();
      if (entries_.count(hash) != 0) {
        std::cerr << "warning: transcript " << path << ":" << line_no
                  << ": duplicate hash " << hash << "; keeping the later entry\n";
      }
      entries_[hash] = response_from_json(obj.at("response"), hash);
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": bad transcript line: " + e.what());
    }
  }
}

void TranscriptStore::attach_file(const std::string& path) {
  std::filesystem::path fs_path(path);
  if (fs_path.has_parent_path()) std::filesystem::create_directories(fs_path.parent_path());
  // Touch the file now so attach failures surface before the first call.
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open transcript for append: " + path);
  std::lock_guard<std::mutex> lock(mutex_);
  file_path_ = path;
}

void TranscriptStore::record(const ProviderRequest& req, const ProviderResponse& resp) {
  std::string hash = request_hash(req);
  std::lock_guard<std::mutex> lock(mutex_);
  if (entries_.count(hash) != 0) {
    std::cerr << "warning: re-recording transcript hash " << hash
              << "; keeping the later entry\n";
  }
  ProviderResponse stored = resp;
  stored.request_hash = hash;
  entries_[hash] = stored;
  if (!file_path_.empty()) {
    json line;
    line["hash"] = hash;
    line["request"] = json::parse(canonical_request_json(req));
    line["response"] = response_to_json(stored);
    std::ofstream out(file_path_, std::ios::app);
    out << line.dump() << "\n";
    if (!out) throw IoError("transcript append failed: " + file_path_);
  }
}

ProviderResponse TranscriptStore::lookup(const std::string& hash) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(hash);
  if (it == entries_.end()) throw ReplayMissError(hash);
  return it->second;
}

bool TranscriptStore::contains(const std::string& hash) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.count(hash) != 0;
}

std::size_t TranscriptStore::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

ProviderResponse ReplayProvider::complete(const ProviderRequest& req) {
  return store_->lookup(request_hash(req));
}

ProviderResponse RecordingProvider::complete(const ProviderRequest& req) {
  ProviderResponse resp = inner_->complete(req);
  store_->record(req, resp);
  return resp;
}

}  // namespace t3::provider
