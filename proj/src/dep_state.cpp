#include "bfw/dep_state.hpp"

namespace bfw {

const char* to_string(SyncKind s) {
  return s == SyncKind::kSemaphore ? "semaphore" : "condvar";
}

SyncKind parse_sync_kind(const std::string& s) {
  if (s == "semaphore" || s == "sem") return SyncKind::kSemaphore;
  if (s == "condvar" || s == "cv") return SyncKind::kCondVar;
  throw ValidationError("sync: unknown sync kind '" + s + "'");
}

DepState::DepState(int r, SyncKind kind) : r_(r), kind_(kind) {
  if (r < 1) throw ValidationError("r: dependency grid must be >= 1");
  const size_t cells = static_cast<size_t>(r) * r;
  if (kind == SyncKind::kSemaphore)
    sem_cells_ = std::make_unique<SemCell[]>(cells);
  else
    cv_cells_ = std::make_unique<CvCell[]>(cells);
}

void DepState::post(int i, int j) {
  round_posts_.fetch_add(1, std::memory_order_relaxed);
  if (kind_ == SyncKind::kSemaphore) {
    SemCell& c = sem_cells_[idx(i, j)];
    const int32_t before = c.posted.fetch_add(1, std::memory_order_relaxed);
    if (before >= 2)
      throw ProtocolViolation("semaphore overflow at cell (" + std::to_string(i) + "," +
                              std::to_string(j) + "): third post in one round");
    c.sem.release(1);
  } else {
    CvCell& c = cv_cells_[idx(i, j)];
    bool ready;
    {
      std::lock_guard<std::mutex> lk(c.m);
      if (c.pending <= 0)
        throw ProtocolViolation("pending-count underflow at cell (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      --c.pending;
      ++c.posted;
      ready = (c.pending == 0);
    }
    // Exactly one waiter per cell, so one signal when it could be sleeping.
    if (ready) c.cv.notify_one();
  }
}

void DepState::wait_ready(int i, int j) {
  round_waits_.fetch_add(2, std::memory_order_relaxed);
  if (kind_ == SyncKind::kSemaphore) {
    SemCell& c = sem_cells_[idx(i, j)];
    c.sem.acquire();
    c.sem.acquire();
    c.consumed.fetch_add(2, std::memory_order_relaxed);
  } else {
    CvCell& c = cv_cells_[idx(i, j)];
    std::unique_lock<std::mutex> lk(c.m);
    while (c.pending > 0) c.cv.wait(lk);
  }
}

int DepState::pending_count(int i, int j) const {
  if (kind_ == SyncKind::kSemaphore)
    return 2 - sem_cells_[idx(i, j)].posted.load(std::memory_order_relaxed);
  const CvCell& c = cv_cells_[idx(i, j)];
  std::lock_guard<std::mutex> lk(c.m);
  return c.pending;
}

void DepState::verify_round_complete(int pivot) const {
  const int64_t expected = 2 * static_cast<int64_t>(r_ - 1) * (r_ - 1);
  const int64_t posts = round_posts_.load();
  const int64_t waits = round_waits_.load();
  if (posts != expected || waits != expected)
    throw ProtocolViolation("round " + std::to_string(pivot) + ": posts=" +
                            std::to_string(posts) + " waits=" + std::to_string(waits) +
                            " expected=" + std::to_string(expected));
  for (int i = 0; i < r_; ++i) {
    for (int j = 0; j < r_; ++j) {
      const bool on_pivot = (i == pivot || j == pivot);
      int posted, outstanding;
      if (kind_ == SyncKind::kSemaphore) {
        const SemCell& c = sem_cells_[idx(i, j)];
        posted = c.posted.load();
        outstanding = posted - c.consumed.load();
      } else {
        const CvCell& c = cv_cells_[idx(i, j)];
        std::lock_guard<std::mutex> lk(c.m);
        posted = c.posted;
        outstanding = 0;  // waiter observed pending == 0 before returning
      }
      const int want_posted = on_pivot ? 0 : 2;
      if (posted != want_posted || outstanding != 0)
        throw ProtocolViolation("round " + std::to_string(pivot) + " cell (" +
                                std::to_string(i) + "," + std::to_string(j) + "): posted=" +
                                std::to_string(posted) + " outstanding=" +
                                std::to_string(outstanding) + " want posted=" +
                                std::to_string(want_posted));
    }
  }
}

void DepState::begin_round() {
  round_posts_.store(0, std::memory_order_relaxed);
  round_waits_.store(0, std::memory_order_relaxed);
  const size_t cells = static_cast<size_t>(r_) * r_;
  if (kind_ == SyncKind::kSemaphore) {
    for (size_t c = 0; c < cells; ++c) {
      sem_cells_[c].posted.store(0, std::memory_order_relaxed);
      sem_cells_[c].consumed.store(0, std::memory_order_relaxed);
      // The semaphore itself is already back at 0: every post was consumed.
    }
  } else {
    for (size_t c = 0; c < cells; ++c) {
      std::lock_guard<std::mutex> lk(cv_cells_[c].m);
      cv_cells_[c].pending = 2;
      cv_cells_[c].posted = 0;
    }
  }
}

}  // namespace bfw
