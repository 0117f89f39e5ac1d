#include "bfw/scheduler.hpp"

#include <barrier>
#include <chrono>
#include <cstdio>
#include <exception>
#include <future>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>

#include "bfw/tiled.hpp"

namespace bfw {

const char* to_string(SolveMode m) {
  return m == SolveMode::kBarrier ? "barrier" : "dep-driven";
}

SolveMode parse_solve_mode(const std::string& s) {
  if (s == "barrier") return SolveMode::kBarrier;
  if (s == "dep-driven" || s == "depdriven") return SolveMode::kDepDriven;
  throw ValidationError("mode: unknown solve mode '" + s + "'");
}

void SolveConfig::validate(int n) const {
  if (bs < 1) throw ValidationError("bs: must be >= 1, got " + std::to_string(bs));
  if (n % bs != 0) throw BlockSizeError(n, bs);
  if (threads < 1)
    throw ValidationError("threads: must be >= 1, got " + std::to_string(threads));
  if (threads > 4096)
    throw ValidationError("threads: must be <= 4096, got " + std::to_string(threads));
}

namespace {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Contiguous near-equal partition of [0, rows) into `parts` ranges.
inline std::pair<int, int> split_rows(int rows, int parts, int idx) {
  const int base = rows / parts;
  const int rem = rows % parts;
  const int lo = idx * base + (idx < rem ? idx : rem);
  return {lo, lo + base + (idx < rem ? 1 : 0)};
}

// Skip-the-pivot index mapping: m in [0, r-1) -> the m-th block index != k.
inline int nth_except(int m, int k) { return m < k ? m : m + 1; }

template <typename T>
class Engine {
 public:
  Engine(TiledMatrix<T>& tiles, TiledMatrix<int32_t>* ptiles, const SolveConfig& cfg,
         const SolveHooks& hooks)
      : tiles_(tiles),
        ptiles_(ptiles),
        cfg_(cfg),
        hooks_(hooks),
        r_(tiles.rounds()),
        bs_(tiles.bs()),
        barrier_(cfg.threads),
        counters_(2 * static_cast<size_t>(r_)) {
    if (cfg_.mode == SolveMode::kDepDriven) {
      deps_ = std::make_unique<DepState>(r_, cfg_.sync);
      stats_.dep_rounds.resize(r_);
    }
    stats_.rounds = r_;
    if (hooks_.log) {
      const size_t per_round = 2 * (1 + 2 * static_cast<size_t>(r_ - 1) +
                                    static_cast<size_t>(r_ - 1) * (r_ - 1));
      hooks_.log->reset(cfg_.threads, per_round * r_);
    }
  }

  SolveStats run() {
    std::vector<int> cpus = affinity_cpu_list(cfg_.affinity, cfg_.threads,
                                              physical_core_count(), logical_cpu_count());
    std::promise<bool> gate;
    std::shared_future<bool> go = gate.get_future().share();
    std::vector<std::jthread> team;
    team.reserve(cfg_.threads);
    try {
      for (int w = 0; w < cfg_.threads; ++w) {
        const int cpu = cpus.empty() ? -1 : cpus[w];
        team.emplace_back([this, w, cpu, go] { worker_entry(w, cpu, go); });
      }
    } catch (const std::system_error& e) {
      gate.set_value(false);
      team.clear();  // joins the ones that did start
      throw ThreadPoolError("could not start " + std::to_string(cfg_.threads) +
                            " worker threads: " + e.what());
    }
    gate.set_value(true);
    team.clear();  // join
    if (first_error_) std::rethrow_exception(first_error_);
    stats_.compute_seconds = std::chrono::duration<double>(t_end_ - t_start_).count();
    return stats_;
  }

 private:
  void fail(std::exception_ptr e) {
    {
      std::lock_guard<std::mutex> lk(err_mutex_);
      if (!first_error_) first_error_ = e;
    }
    failed_.store(true, std::memory_order_release);
  }
  bool has_failed() const { return failed_.load(std::memory_order_acquire); }

  void worker_entry(int tid, int cpu, std::shared_future<bool> go) {
    if (cpu >= 0 && !affinity_broken_.load(std::memory_order_relaxed)) {
      if (!pin_current_thread(cpu)) {
        if (!affinity_broken_.exchange(true))
          std::fprintf(stderr,
                       "warning: could not pin worker %d to cpu %d; "
                       "continuing without affinity\n",
                       tid, cpu);
      }
    }
    if (!go.get()) return;  // team never fully assembled
    try {
      worker(tid);
    } catch (...) {
      fail(std::current_exception());
      barrier_.arrive_and_drop();
    }
  }

  void worker(int tid) {
    if (tid == 0) t_start_ = std::chrono::steady_clock::now();
    for (int round = 0; round < r_; ++round) {
      phase1(round, tid);
      if (has_failed()) { barrier_.arrive_and_drop(); return; }
      if (cfg_.mode == SolveMode::kBarrier) {
        drain_phase23(round, tid, /*post=*/false);
        barrier_.arrive_and_wait();
        if (has_failed()) { barrier_.arrive_and_drop(); return; }
        drain_phase4_barrier(round, tid);
        barrier_.arrive_and_wait();
      } else {
        drain_depdriven(round, tid);
        barrier_.arrive_and_wait();
        if (tid == 0) {
          try {
            deps_->verify_round_complete(round);
            stats_.dep_rounds[round] = {deps_->round_posts(), deps_->round_waits()};
            deps_->begin_round();
          } catch (...) {
            fail(std::current_exception());
          }
        }
        barrier_.arrive_and_wait();
      }
      if (has_failed()) { barrier_.arrive_and_drop(); return; }
    }
    if (tid == 0) t_end_ = std::chrono::steady_clock::now();
  }

  // --- phase bodies ---------------------------------------------------------

  // Pivot tile, relaxed cooperatively: per local k the rows are partitioned
  // across the team with a barrier between consecutive k.  With the usual
  // zero diagonal, row k and column k cannot change at step k, so the
  // partition is race-free; a negative diagonal (negative cycle inside the
  // tile) falls back to running the step on thread 0 alone to keep the exact
  // sequential update order.
  void phase1(int round, int tid) {
    T* piv = tiles_.tile(round, round);
    int32_t* ppiv = ptiles_ ? ptiles_->tile(round, round) : nullptr;
    if (hooks_.log && tid == 0)
      hooks_.log->record(tid, round, SolvePhase::kPivot, round, round, true);
    maybe_delay(round, 1, round, round);
    for (int kk = 0; kk < bs_; ++kk) {
      const bool serial = piv[static_cast<size_t>(kk) * bs_ + kk] < T(0);
      auto [i0, i1] = serial ? (tid == 0 ? std::pair<int, int>{0, bs_}
                                         : std::pair<int, int>{0, 0})
                             : split_rows(bs_, cfg_.threads, tid);
      relax_step(piv, piv, piv, ppiv, bs_, kk, round * bs_ + kk, i0, i1);
      barrier_.arrive_and_wait();
    }
    if (hooks_.log) {
      if (tid == 0) hooks_.log->record(tid, round, SolvePhase::kPivot, round, round, false);
      // Give dependents a start timestamp strictly after the pivot's end.
      barrier_.arrive_and_wait();
    }
  }

  // Phases 2 and 3: one pool of 2(r-1) independent tiles, claimed dynamically.
  void drain_phase23(int round, int tid, bool post) {
    const int tasks = 2 * (r_ - 1);
    std::atomic<int>& ctr = counters_[2 * round];
    for (int t = ctr.fetch_add(1, std::memory_order_relaxed); t < tasks;
         t = ctr.fetch_add(1, std::memory_order_relaxed)) {
      if (t < r_ - 1)
        run_phase2(round, nth_except(t, round), tid, post);
      else
        run_phase3(nth_except(t - (r_ - 1), round), round, tid, post);
    }
  }

  void drain_phase4_barrier(int round, int tid) {
    const int side = r_ - 1;
    const int tasks = side * side;
    std::atomic<int>& ctr = counters_[2 * round + 1];
    for (int q = ctr.fetch_add(1, std::memory_order_relaxed); q < tasks;
         q = ctr.fetch_add(1, std::memory_order_relaxed)) {
      const int i = nth_except(q / side, round);
      const int j = nth_except(q % side, round);
      run_phase4(i, j, round, tid, /*wait=*/false);
    }
  }

  // One FIFO list: all of phases 2 and 3 first, then the remainder tiles.
  // Claim order makes starvation impossible: when a worker blocks on a
  // remainder tile, every producer of that tile is already claimed by
  // somebody (producers sit earlier in the list) and producers never block.
  void drain_depdriven(int round, int tid) {
    const int ph23 = 2 * (r_ - 1);
    const int tasks = ph23 + (r_ - 1) * (r_ - 1);
    std::atomic<int>& ctr = counters_[2 * round];
    for (int t = ctr.fetch_add(1, std::memory_order_relaxed); t < tasks;
         t = ctr.fetch_add(1, std::memory_order_relaxed)) {
      if (t < r_ - 1) {
        run_phase2(round, nth_except(t, round), tid, /*post=*/true);
      } else if (t < ph23) {
        run_phase3(nth_except(t - (r_ - 1), round), round, tid, /*post=*/true);
      } else {
        const int q = t - ph23;
        const int i = nth_except(q / (r_ - 1), round);
        const int j = nth_except(q % (r_ - 1), round);
        run_phase4(i, j, round, tid, /*wait=*/true);
      }
    }
  }

  // Pivot-row tile (k,j): c aliases b, a is the pivot.  Completing it
  // satisfies one prerequisite of every remainder tile in column j.
  void run_phase2(int k, int j, int tid, bool post) {
    T* c = tiles_.tile(k, j);
    int32_t* pc = ptiles_ ? ptiles_->tile(k, j) : nullptr;
    if (hooks_.log) hooks_.log->record(tid, k, SolvePhase::kPivotRow, k, j, true);
    maybe_delay(k, 2, k, j);
    tile_relax<T>(c, tiles_.tile(k, k), c, pc, bs_, k * bs_, cfg_.tier);
    if (hooks_.log) hooks_.log->record(tid, k, SolvePhase::kPivotRow, k, j, false);
    if (post)
      for (int i = 0; i < r_; ++i)
        if (i != k) deps_->post(i, j);
  }

  // Pivot-column tile (i,k): c aliases a, b is the pivot.  Satisfies one
  // prerequisite of every remainder tile in row i.
  void run_phase3(int i, int k, int tid, bool post) {
    T* c = tiles_.tile(i, k);
    int32_t* pc = ptiles_ ? ptiles_->tile(i, k) : nullptr;
    if (hooks_.log) hooks_.log->record(tid, k, SolvePhase::kPivotCol, i, k, true);
    maybe_delay(k, 3, i, k);
    tile_relax<T>(c, c, tiles_.tile(k, k), pc, bs_, k * bs_, cfg_.tier);
    if (hooks_.log) hooks_.log->record(tid, k, SolvePhase::kPivotCol, i, k, false);
    if (post)
      for (int j = 0; j < r_; ++j)
        if (j != k) deps_->post(i, j);
  }

  void run_phase4(int i, int j, int k, int tid, bool wait) {
    if (wait) deps_->wait_ready(i, j);
    T* c = tiles_.tile(i, j);
    int32_t* pc = ptiles_ ? ptiles_->tile(i, j) : nullptr;
    if (hooks_.log) hooks_.log->record(tid, k, SolvePhase::kRemainder, i, j, true);
    maybe_delay(k, 4, i, j);
    tile_relax<T>(c, tiles_.tile(i, k), tiles_.tile(k, j), pc, bs_, k * bs_, cfg_.tier);
    if (hooks_.log) hooks_.log->record(tid, k, SolvePhase::kRemainder, i, j, false);
  }

  void maybe_delay(int round, int phase, int bi, int bj) {
    if (hooks_.delay_max_us <= 0) return;
    uint64_t h = splitmix64(hooks_.delay_seed ^ (static_cast<uint64_t>(round) << 40) ^
                            (static_cast<uint64_t>(phase) << 32) ^
                            (static_cast<uint64_t>(bi) << 16) ^ static_cast<uint64_t>(bj));
    std::this_thread::sleep_for(
        std::chrono::microseconds(h % (static_cast<uint64_t>(hooks_.delay_max_us) + 1)));
  }

  TiledMatrix<T>& tiles_;
  TiledMatrix<int32_t>* ptiles_;
  const SolveConfig cfg_;
  const SolveHooks hooks_;
  const int r_, bs_;
  std::barrier<> barrier_;
  std::vector<std::atomic<int>> counters_;
  std::unique_ptr<DepState> deps_;
  SolveStats stats_;
  std::atomic<bool> failed_{false};
  std::atomic<bool> affinity_broken_{false};
  std::mutex err_mutex_;
  std::exception_ptr first_error_;
  std::chrono::steady_clock::time_point t_start_{}, t_end_{};
};

}  // namespace

template <typename T>
SolveResult<T> solve(const DistanceMatrix<T>& d, const SolveConfig& cfg,
                     const SolveHooks& hooks) {
  cfg.validate(d.n());
  TiledMatrix<T> tiles = to_tiled(d, cfg.bs);
  std::optional<TiledMatrix<int32_t>> ptiles;
  if (cfg.track_paths) {
    ptiles.emplace(d.n(), cfg.bs);
    ptiles->fill(IntermediateMatrix::kNone);
  }
  Engine<T> engine(tiles, ptiles ? &*ptiles : nullptr, cfg, hooks);
  SolveStats stats = engine.run();
  SolveResult<T> res{from_tiled(tiles), std::nullopt, std::move(stats)};
  if (ptiles) res.intermediates = paths_from_tiled(*ptiles);
  return res;
}

template SolveResult<float> solve<float>(const DistanceMatrix<float>&, const SolveConfig&,
                                         const SolveHooks&);
template SolveResult<double> solve<double>(const DistanceMatrix<double>&, const SolveConfig&,
                                           const SolveHooks&);

AnySolveResult solve(const AnyDistanceMatrix& d, const SolveConfig& cfg,
                     const SolveHooks& hooks) {
  return std::visit(
      [&](const auto& m) -> AnySolveResult { return solve(m, cfg, hooks); }, d);
}

}  // namespace bfw
