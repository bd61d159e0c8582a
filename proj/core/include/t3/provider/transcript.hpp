#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "t3/provider/provider.hpp"

namespace t3::provider {

// Append-only JSONL store of provider traffic keyed by request hash.
// Lookups are exact-match; loading or recording the same hash twice keeps
// the last entry and warns.
class TranscriptStore {
 public:
  TranscriptStore() = default;

  void load(const std::string& path);         // merge entries from an existing store
  void attach_file(const std::string& path);  // future records also append here

  void record(const ProviderRequest& req, const ProviderResponse& resp);
  ProviderResponse lookup(const std::string& hash) const;  // throws ReplayMissError
  bool contains(const std::string& hash) const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::string, ProviderResponse> entries_;
  std::string file_path_;
};

// Answers requests from a recorded transcript; fully offline and
// deterministic.
class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(std::shared_ptr<TranscriptStore> store) : store_(std::move(store)) {}
  ProviderResponse complete(const ProviderRequest& req) override;

 private:
  std::shared_ptr<TranscriptStore> store_;
};

// Forwards to an inner provider and records every exchange.
class RecordingProvider : public Provider {
 public:
  RecordingProvider(std::unique_ptr<Provider> inner, std::shared_ptr<TranscriptStore> store)
      : inner_(std::move(inner)), store_(std::move(store)) {}
  ProviderResponse complete(const ProviderRequest& req) override;

 private:
  std::unique_ptr<Provider> inner_;
  std::shared_ptr<TranscriptStore> store_;
};

}  // namespace t3::provider
