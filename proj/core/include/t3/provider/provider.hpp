#pragma once

#include <chrono>
#include <mutex>

#include "t3/provider/request.hpp"

namespace t3::provider {

// One chat-completion contract for every backend. Implementations must be
// safe to call from multiple worker threads.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse complete(const ProviderRequest& req) = 0;
};

// Token-bucket limiter serializing request bursts. A rate of 0 disables
// limiting. acquire() blocks the calling thread until a slot is free.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute = 0.0);
  void acquire();

 private:
  std::mutex mutex_;
  double interval_s_ = 0.0;
  std::chrono::steady_clock::time_point next_slot_;
};

}  // namespace t3::provider
