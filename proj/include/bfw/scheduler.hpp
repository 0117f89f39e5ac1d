#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bfw/affinity.hpp"
#include "bfw/dep_state.hpp"
#include "bfw/event_log.hpp"
#include "bfw/kernel.hpp"
#include "bfw/matrix.hpp"

namespace bfw {

// kBarrier: classic round structure — phase 1, then phases 2+3 as one pool,
// barrier, phase 4 as one pool, barrier.
// kDepDriven: phases 2-4 of a round form a single FIFO task list; remainder
// tiles block on their two per-round prerequisites (DepState) instead of a
// phase barrier, so phase-4 tiles start as soon as their own row/column
// producers finish.
enum class SolveMode : int { kBarrier = 0, kDepDriven = 1 };

const char* to_string(SolveMode m);
SolveMode parse_solve_mode(const std::string& s);

struct SolveConfig {
  int bs = 64;
  int threads = 1;
  KernelTier tier = KernelTier::kUnrolled;
  SolveMode mode = SolveMode::kBarrier;
  SyncKind sync = SyncKind::kSemaphore;  // used by kDepDriven only
  AffinityPolicy affinity = AffinityPolicy::kNone;
  ElemKind elem_kind = ElemKind::kF32;  // for kind-dispatched entry points
  bool track_paths = false;

  // Throws ValidationError / BlockSizeError.
  void validate(int n) const;
};

struct RoundDepStats {
  int64_t posts = 0;
  int64_t waits = 0;
};

struct SolveStats {
  double compute_seconds = 0;  // round loop only; excludes layout conversion
  int rounds = 0;
  std::vector<RoundDepStats> dep_rounds;  // one per round in kDepDriven, else empty
};

// Test instrumentation.  `log` turns on per-tile event tracing (and one extra
// barrier per round to give the pivot tile an unambiguous end timestamp).
// delay_max_us > 0 sleeps every tile task for a deterministic pseudo-random
// 0..delay_max_us microseconds, to shake out interleavings.
struct SolveHooks {
  EventLog* log = nullptr;
  int delay_max_us = 0;
  uint64_t delay_seed = 0;
};

template <typename T>
struct SolveResult {
  DistanceMatrix<T> distances;
  std::optional<IntermediateMatrix> intermediates;
  SolveStats stats;
};

// Blocked all-pairs shortest paths over cfg.threads worker threads.  The
// result is bitwise identical to fw_classic for every (bs, threads, tier,
// mode, sync, affinity) combination; only the wall time may differ.
template <typename T>
SolveResult<T> solve(const DistanceMatrix<T>& d, const SolveConfig& cfg,
                     const SolveHooks& hooks = {});

using AnySolveResult = std::variant<SolveResult<float>, SolveResult<double>>;

AnySolveResult solve(const AnyDistanceMatrix& d, const SolveConfig& cfg,
                     const SolveHooks& hooks = {});

extern template SolveResult<float> solve<float>(const DistanceMatrix<float>&,
                                                const SolveConfig&, const SolveHooks&);
extern template SolveResult<double> solve<double>(const DistanceMatrix<double>&,
                                                  const SolveConfig&, const SolveHooks&);

}  // namespace bfw
