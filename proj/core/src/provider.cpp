#include "t3/provider/provider.hpp"

#include <thread>

namespace t3::provider {

RateLimiter::RateLimiter(double requests_per_minute) {
  if (requests_per_minute > 0.0) interval_s_ = 60.0 / requests_per_minute;
  next_slot_ = std::chrono::steady_clock::now();
}

void RateLimiter::acquire() {
  if (interval_s_ <= 0.0) return;
  std::chrono::steady_clock::time_point wake;
  {
    std::lock_guard lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    if (next_slot_ < now) next_slot_ = now;
    wake = next_slot_;
    next_slot_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(interval_s_));
  }
  std::this_thread::sleep_until(wake);
}

}  // namespace t3::provider
