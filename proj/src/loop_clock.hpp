#pragma once

#include <chrono>

namespace l1saddle::detail {

// Accumulates monotonic time over start/stop intervals so that gap
// evaluations can be excluded from reported loop times.
class LoopClock {
 public:
  void start() { begin_ = std::chrono::steady_clock::now(); }
  void stop() {
    total_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - begin_).count();
  }
  double seconds() const { return total_; }

 private:
  std::chrono::steady_clock::time_point begin_;
  double total_ = 0.0;
};

}  // namespace l1saddle::detail
