#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace goalrec {

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("time limit exceeded") {}
};

/// Cooperative time limit polled from long-running loops. A default
/// constructed deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(Clock::duration budget) : limit_(Clock::now() + budget) {}

  static Deadline after_seconds(double seconds) {
    return Deadline(std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds)));
  }

  bool expired() const { return limit_ && Clock::now() >= *limit_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  std::optional<Clock::time_point> limit_;
};

}  // namespace goalrec
