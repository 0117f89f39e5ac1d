#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>

#include "bfw/errors.hpp"

namespace bfw {

enum class SyncKind : int { kSemaphore = 0, kCondVar = 1 };

const char* to_string(SyncKind s);
SyncKind parse_sync_kind(const std::string& s);

// Per-round dependency tracking for the remainder phase.  Every tile (i,j)
// with i != k and j != k needs exactly two prerequisites per round: its
// pivot-row tile (k,j) and its pivot-column tile (i,k).  Producers post one
// unit per satisfied prerequisite; the consumer blocks until both arrived.
//
// Two interchangeable implementations of the same protocol:
//  - kSemaphore: one counting semaphore per cell, capped at 2.  post =
//    release(1), wait = acquire() twice.
//  - kCondVar: per-cell mutex + condition variable + pending counter F
//    initialized to 2.  post = decrement under the lock + notify; wait =
//    sleep while F > 0.  The consumer never sleeps when F already hit 0.
//
// Cells on the pivot row/column are never posted or waited on (they are
// produced by phases 2 and 3 themselves); after a completed round every
// remainder cell must balance at posts == waits == 2 and the grand totals at
// 2*(r-1)^2 each.  verify_round_complete() checks this and throws
// ProtocolViolation on any imbalance; begin_round() rearms all cells.
class DepState {
 public:
  DepState(int r, SyncKind kind);

  SyncKind kind() const { return kind_; }
  int r() const { return r_; }

  void post(int i, int j);
  void wait_ready(int i, int j);

  // 2 - net posts seen so far; 2 means untouched, 0 means ready.
  int pending_count(int i, int j) const;

  int64_t round_posts() const { return round_posts_.load(std::memory_order_relaxed); }
  int64_t round_waits() const { return round_waits_.load(std::memory_order_relaxed); }

  // Call only when no thread is inside post/wait (i.e. between rounds).
  void verify_round_complete(int pivot) const;
  void begin_round();

 private:
  struct SemCell {
    std::counting_semaphore<2> sem{0};
    std::atomic<int32_t> posted{0};
    std::atomic<int32_t> consumed{0};
  };
  struct CvCell {
    mutable std::mutex m;
    std::condition_variable cv;
    int32_t pending = 2;
    int32_t posted = 0;
  };

  size_t idx(int i, int j) const { return static_cast<size_t>(i) * r_ + j; }

  int r_;
  SyncKind kind_;
  std::unique_ptr<SemCell[]> sem_cells_;
  std::unique_ptr<CvCell[]> cv_cells_;
  std::atomic<int64_t> round_posts_{0};
  std::atomic<int64_t> round_waits_{0};
};

}  // namespace bfw
