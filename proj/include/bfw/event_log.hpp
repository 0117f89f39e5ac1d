#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <vector>

namespace bfw {

enum class SolvePhase : uint8_t { kPivot = 1, kPivotRow = 2, kPivotCol = 3, kRemainder = 4 };

struct BlockEvent {
  int64_t ts_ns;  // steady clock, comparable within one process
  int16_t thread;
  int16_t round;
  SolvePhase phase;
  bool is_start;
  int16_t bi, bj;
};

// Optional per-tile tracing.  Start events are recorded after dependency
// waits, end events before dependency posts, so the log's timestamps witness
// the scheduler's happens-before edges.  Buffers are per-thread and
// preallocated; recording is a few stores and must not reorder the run it
// observes.
class EventLog {
 public:
  void reset(int threads, size_t reserve_per_thread) {
    buffers_.assign(threads, {});
    for (auto& b : buffers_) b.reserve(reserve_per_thread);
  }

  void record(int thread, int round, SolvePhase phase, int bi, int bj, bool is_start) {
    buffers_[thread].push_back(BlockEvent{
        std::chrono::steady_clock::now().time_since_epoch().count(),
        static_cast<int16_t>(thread), static_cast<int16_t>(round), phase, is_start,
        static_cast<int16_t>(bi), static_cast<int16_t>(bj)});
  }

  // All threads' events merged, sorted by timestamp.
  std::vector<BlockEvent> merged() const {
    std::vector<BlockEvent> all;
    size_t total = 0;
    for (const auto& b : buffers_) total += b.size();
    all.reserve(total);
    for (const auto& b : buffers_) all.insert(all.end(), b.begin(), b.end());
    std::stable_sort(all.begin(), all.end(),
                     [](const BlockEvent& x, const BlockEvent& y) { return x.ts_ns < y.ts_ns; });
    return all;
  }

  size_t event_count() const {
    size_t total = 0;
    for (const auto& b : buffers_) total += b.size();
    return total;
  }

 private:
  std::vector<std::vector<BlockEvent>> buffers_;
};

}  // namespace bfw
