#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "bfw/matrix.hpp"

namespace bfw {

// Optimization ladder for the tile kernel.  Every rung must produce results
// bitwise identical to kBaseline for every aliasing shape the solver uses;
// the rungs differ only in how fast they get there.
enum class KernelTier : int {
  kBaseline = 0,          // scalar, branchy, definitional
  kVectorized,            // branchless min over contiguous rows
  kVectorizedAligned,     // + 64-byte alignment promises, no-alias fast path
  kBranchHinted,          // + guarded stores again, improvement branch unlikely
  kUnrolled,              // + compile-time bs specialization, i-loop pairs
};

constexpr std::array<KernelTier, 5> kTierLadder = {
    KernelTier::kBaseline, KernelTier::kVectorized, KernelTier::kVectorizedAligned,
    KernelTier::kBranchHinted, KernelTier::kUnrolled};

const char* to_string(KernelTier t);
KernelTier parse_kernel_tier(const std::string& s);

// Widest SIMD extension this binary was compiled for — a report field (the
// vectorized tiers rely on the auto-vectorizer, so the width is whatever the
// build enabled), never a correctness knob.
const char* kernel_isa_info();

// Block sizes the unrolled tier specializes at compile time; everything else
// falls back to a generic runtime-bs version of the same structure.
constexpr std::array<int, 4> kUnrolledBlockSizes = {32, 64, 128, 256};

namespace kernels {

// ---------------------------------------------------------------------------
// Tile relaxation: c[i][j] = min(c[i][j], a[i][k] + b[k][j]) for local k
// ascending, i ascending, j ascending, with a[i][k] hoisted once per (k,i).
// In-place shapes are part of the contract: the solver calls this with
// c==a==b (pivot tile), c==b (pivot-row tile), c==a (pivot-column tile) and
// all-distinct (remainder tiles), and every tier must observe partial updates
// in exactly the baseline order in all four shapes.
//
// pc, when non-null, is the tile's slice of the intermediate matrix; a cell
// is set to k_base + k whenever the distance cell strictly improves.
// ---------------------------------------------------------------------------

template <typename T, bool TrackP>
void tile_baseline(T* c, const T* a, const T* b, int32_t* pc, int bs, int32_t k_base) {
  for (int k = 0; k < bs; ++k) {
    const T* bk = b + static_cast<size_t>(k) * bs;
    for (int i = 0; i < bs; ++i) {
      T* ci = c + static_cast<size_t>(i) * bs;
      const T aik = a[static_cast<size_t>(i) * bs + k];
      for (int j = 0; j < bs; ++j) {
        const T cand = aik + bk[j];
        if (cand < ci[j]) {
          ci[j] = cand;
          if constexpr (TrackP) pc[static_cast<size_t>(i) * bs + j] = k_base + k;
        }
      }
    }
  }
}

// Branchless select, unconditional store.  Rewriting an unimproved cell with
// its own value is invisible to later reads, so this is order-equivalent to
// the guarded baseline even when c aliases a or b.
template <typename T, bool TrackP>
void tile_vectorized(T* c, const T* a, const T* b, int32_t* pc, int bs, int32_t k_base) {
  for (int k = 0; k < bs; ++k) {
    const T* bk = b + static_cast<size_t>(k) * bs;
    const int32_t kg = k_base + k;
    for (int i = 0; i < bs; ++i) {
      T* ci = c + static_cast<size_t>(i) * bs;
      const T aik = a[static_cast<size_t>(i) * bs + k];
      if constexpr (TrackP) {
        int32_t* pi = pc + static_cast<size_t>(i) * bs;
        for (int j = 0; j < bs; ++j) {
          const T cand = aik + bk[j];
          const T cur = ci[j];
          const bool better = cand < cur;
          ci[j] = better ? cand : cur;
          if (better) pi[j] = kg;
        }
      } else {
        for (int j = 0; j < bs; ++j) {
          const T cand = aik + bk[j];
          const T cur = ci[j];
          ci[j] = cand < cur ? cand : cur;
        }
      }
    }
  }
}

// No-alias path: restrict lets the compiler keep the b row in registers
// across the whole i loop instead of reloading after every store.  The body
// lives here rather than delegating so the qualifier actually reaches the
// memory operations.
template <typename T, bool TrackP>
void tile_aligned_noalias(T* __restrict c, const T* __restrict a, const T* __restrict b,
                          int32_t* __restrict pc, int bs, int32_t k_base) {
  c = std::assume_aligned<64>(c);
  a = std::assume_aligned<64>(a);
  b = std::assume_aligned<64>(b);
  for (int k = 0; k < bs; ++k) {
    const T* __restrict bk = b + static_cast<size_t>(k) * bs;
    const int32_t kg = k_base + k;
    for (int i = 0; i < bs; ++i) {
      T* __restrict ci = c + static_cast<size_t>(i) * bs;
      const T aik = a[static_cast<size_t>(i) * bs + k];
      if constexpr (TrackP) {
        int32_t* __restrict pi = pc + static_cast<size_t>(i) * bs;
        for (int j = 0; j < bs; ++j) {
          const T cand = aik + bk[j];
          const T cur = ci[j];
          const bool better = cand < cur;
          ci[j] = better ? cand : cur;
          if (better) pi[j] = kg;
        }
      } else {
        for (int j = 0; j < bs; ++j) {
          const T cand = aik + bk[j];
          const T cur = ci[j];
          ci[j] = cand < cur ? cand : cur;
        }
      }
    }
  }
}

template <typename T, bool TrackP>
void tile_aligned_aliased(T* c, const T* a, const T* b, int32_t* pc, int bs, int32_t k_base) {
  c = std::assume_aligned<64>(c);
  a = std::assume_aligned<64>(a);
  b = std::assume_aligned<64>(b);
  tile_vectorized<T, TrackP>(c, a, b, pc, bs, k_base);
}

template <typename T, bool TrackP>
void tile_vectorized_aligned(T* c, const T* a, const T* b, int32_t* pc, int bs,
                             int32_t k_base) {
  if (c != a && c != b)
    tile_aligned_noalias<T, TrackP>(c, a, b, pc, bs, k_base);
  else
    tile_aligned_aliased<T, TrackP>(c, a, b, pc, bs, k_base);
}

// Hinted tier: the improvement test becomes a real branch again, marked
// unlikely (after the first rounds most relaxations fail), and the store
// happens only inside it.  Unimproved cells are never rewritten, which is
// exactly what the vectorizer turns into compare + masked store: far less
// store traffic than the unconditional select above once improvements
// become rare.
template <typename T, bool TrackP>
void tile_hinted_noalias(T* __restrict c, const T* __restrict a, const T* __restrict b,
                         int32_t* __restrict pc, int bs, int32_t k_base) {
  c = std::assume_aligned<64>(c);
  a = std::assume_aligned<64>(a);
  b = std::assume_aligned<64>(b);
  for (int k = 0; k < bs; ++k) {
    const T* __restrict bk = b + static_cast<size_t>(k) * bs;
    const int32_t kg = k_base + k;
    for (int i = 0; i < bs; ++i) {
      T* __restrict ci = c + static_cast<size_t>(i) * bs;
      int32_t* __restrict pi = TrackP ? pc + static_cast<size_t>(i) * bs : nullptr;
      const T aik = a[static_cast<size_t>(i) * bs + k];
      for (int j = 0; j < bs; ++j) {
        const T cand = aik + bk[j];
        if (cand < ci[j]) [[unlikely]] {
          ci[j] = cand;
          if constexpr (TrackP) pi[j] = kg;
        }
      }
    }
  }
}

template <typename T, bool TrackP>
void tile_hinted_aliased(T* c, const T* a, const T* b, int32_t* pc, int bs, int32_t k_base) {
  c = std::assume_aligned<64>(c);
  a = std::assume_aligned<64>(a);
  b = std::assume_aligned<64>(b);
  for (int k = 0; k < bs; ++k) {
    const T* bk = b + static_cast<size_t>(k) * bs;
    const int32_t kg = k_base + k;
    for (int i = 0; i < bs; ++i) {
      T* ci = c + static_cast<size_t>(i) * bs;
      int32_t* pi = TrackP ? pc + static_cast<size_t>(i) * bs : nullptr;
      const T aik = a[static_cast<size_t>(i) * bs + k];
      for (int j = 0; j < bs; ++j) {
        const T cand = aik + bk[j];
        if (cand < ci[j]) [[unlikely]] {
          ci[j] = cand;
          if constexpr (TrackP) pi[j] = kg;
        }
      }
    }
  }
}

template <typename T, bool TrackP>
void tile_branch_hinted(T* c, const T* a, const T* b, int32_t* pc, int bs, int32_t k_base) {
  if (c != a && c != b)
    tile_hinted_noalias<T, TrackP>(c, a, b, pc, bs, k_base);
  else
    tile_hinted_aliased<T, TrackP>(c, a, b, pc, bs, k_base);
}

// Unrolled tier: the hinted guarded-store form, with rows processed in pairs
// sharing one pass over the b row.  kBS > 0 bakes the trip counts in at
// compile time; kBS == 0 reads bs at runtime.  Hoisting both a[i][k] and
// a[i+1][k] up front is exact: column k of a row is only ever written by that
// row's own j==k store, which both orderings place after the hoist.
template <typename T, bool TrackP, int kBS>
void tile_unrolled_noalias(T* __restrict c, const T* __restrict a, const T* __restrict b,
                           int32_t* __restrict pc, int bs_runtime, int32_t k_base) {
  const int bs = kBS > 0 ? kBS : bs_runtime;
  c = std::assume_aligned<64>(c);
  a = std::assume_aligned<64>(a);
  b = std::assume_aligned<64>(b);
  for (int k = 0; k < bs; ++k) {
    const T* bk = b + static_cast<size_t>(k) * bs;
    const int32_t kg = k_base + k;
    int i = 0;
    for (; i + 1 < bs; i += 2) {
      const T a0 = a[static_cast<size_t>(i) * bs + k];
      const T a1 = a[static_cast<size_t>(i + 1) * bs + k];
      T* c0 = c + static_cast<size_t>(i) * bs;
      T* c1 = c0 + bs;
      int32_t* p0 = TrackP ? pc + static_cast<size_t>(i) * bs : nullptr;
      int32_t* p1 = TrackP ? p0 + bs : nullptr;
      for (int j = 0; j < bs; ++j) {
        const T v = bk[j];
        const T cand0 = a0 + v;
        if (cand0 < c0[j]) [[unlikely]] {
          c0[j] = cand0;
          if constexpr (TrackP) p0[j] = kg;
        }
        const T cand1 = a1 + v;
        if (cand1 < c1[j]) [[unlikely]] {
          c1[j] = cand1;
          if constexpr (TrackP) p1[j] = kg;
        }
      }
    }
    for (; i < bs; ++i) {  // odd-bs tail
      const T aik = a[static_cast<size_t>(i) * bs + k];
      T* ci = c + static_cast<size_t>(i) * bs;
      int32_t* pi = TrackP ? pc + static_cast<size_t>(i) * bs : nullptr;
      for (int j = 0; j < bs; ++j) {
        const T cand = aik + bk[j];
        if (cand < ci[j]) [[unlikely]] {
          ci[j] = cand;
          if constexpr (TrackP) pi[j] = kg;
        }
      }
    }
  }
}

// Aliased shapes keep the pair structure but must reload b[k][j] for the
// second row: when c==b and the pair contains row k, the first row's store
// may change the value the second row is required to observe.
template <typename T, bool TrackP, int kBS>
void tile_unrolled_aliased(T* c, const T* a, const T* b, int32_t* pc, int bs_runtime,
                           int32_t k_base) {
  const int bs = kBS > 0 ? kBS : bs_runtime;
  for (int k = 0; k < bs; ++k) {
    const T* bk = b + static_cast<size_t>(k) * bs;
    const int32_t kg = k_base + k;
    int i = 0;
    for (; i + 1 < bs; i += 2) {
      const T a0 = a[static_cast<size_t>(i) * bs + k];
      const T a1 = a[static_cast<size_t>(i + 1) * bs + k];
      T* c0 = c + static_cast<size_t>(i) * bs;
      T* c1 = c0 + bs;
      int32_t* p0 = TrackP ? pc + static_cast<size_t>(i) * bs : nullptr;
      int32_t* p1 = TrackP ? p0 + bs : nullptr;
      for (int j = 0; j < bs; ++j) {
        const T cand0 = a0 + bk[j];
        if (cand0 < c0[j]) [[unlikely]] {
          c0[j] = cand0;
          if constexpr (TrackP) p0[j] = kg;
        }
        const T cand1 = a1 + bk[j];  // deliberate reload, see above
        if (cand1 < c1[j]) [[unlikely]] {
          c1[j] = cand1;
          if constexpr (TrackP) p1[j] = kg;
        }
      }
    }
    for (; i < bs; ++i) {
      const T aik = a[static_cast<size_t>(i) * bs + k];
      T* ci = c + static_cast<size_t>(i) * bs;
      int32_t* pi = TrackP ? pc + static_cast<size_t>(i) * bs : nullptr;
      for (int j = 0; j < bs; ++j) {
        const T cand = aik + bk[j];
        if (cand < ci[j]) [[unlikely]] {
          ci[j] = cand;
          if constexpr (TrackP) pi[j] = kg;
        }
      }
    }
  }
}

template <typename T, bool TrackP>
void tile_unrolled(T* c, const T* a, const T* b, int32_t* pc, int bs, int32_t k_base) {
  const bool noalias = (c != a && c != b);
  switch (bs) {
    case 32:
      noalias ? tile_unrolled_noalias<T, TrackP, 32>(c, a, b, pc, bs, k_base)
              : tile_unrolled_aliased<T, TrackP, 32>(c, a, b, pc, bs, k_base);
      return;
    case 64:
      noalias ? tile_unrolled_noalias<T, TrackP, 64>(c, a, b, pc, bs, k_base)
              : tile_unrolled_aliased<T, TrackP, 64>(c, a, b, pc, bs, k_base);
      return;
    case 128:
      noalias ? tile_unrolled_noalias<T, TrackP, 128>(c, a, b, pc, bs, k_base)
              : tile_unrolled_aliased<T, TrackP, 128>(c, a, b, pc, bs, k_base);
      return;
    case 256:
      noalias ? tile_unrolled_noalias<T, TrackP, 256>(c, a, b, pc, bs, k_base)
              : tile_unrolled_aliased<T, TrackP, 256>(c, a, b, pc, bs, k_base);
      return;
    default:
      noalias ? tile_unrolled_noalias<T, TrackP, 0>(c, a, b, pc, bs, k_base)
              : tile_unrolled_aliased<T, TrackP, 0>(c, a, b, pc, bs, k_base);
      return;
  }
}

}  // namespace kernels

// Relax one tile in place for all local k, dispatching on tier.  Tiles must
// be bs*bs row-major; for tiers above kVectorized the three bases must be
// 64-byte aligned.  pc == nullptr skips intermediate tracking.
template <typename T>
void tile_relax(T* c, const T* a, const T* b, int32_t* pc, int bs, int32_t k_base,
                KernelTier tier) {
  using namespace kernels;
  if (pc) {
    switch (tier) {
      case KernelTier::kBaseline: return tile_baseline<T, true>(c, a, b, pc, bs, k_base);
      case KernelTier::kVectorized: return tile_vectorized<T, true>(c, a, b, pc, bs, k_base);
      case KernelTier::kVectorizedAligned:
        return tile_vectorized_aligned<T, true>(c, a, b, pc, bs, k_base);
      case KernelTier::kBranchHinted:
        return tile_branch_hinted<T, true>(c, a, b, pc, bs, k_base);
      case KernelTier::kUnrolled: return tile_unrolled<T, true>(c, a, b, pc, bs, k_base);
    }
  } else {
    switch (tier) {
      case KernelTier::kBaseline: return tile_baseline<T, false>(c, a, b, pc, bs, k_base);
      case KernelTier::kVectorized:
        return tile_vectorized<T, false>(c, a, b, pc, bs, k_base);
      case KernelTier::kVectorizedAligned:
        return tile_vectorized_aligned<T, false>(c, a, b, pc, bs, k_base);
      case KernelTier::kBranchHinted:
        return tile_branch_hinted<T, false>(c, a, b, pc, bs, k_base);
      case KernelTier::kUnrolled: return tile_unrolled<T, false>(c, a, b, pc, bs, k_base);
    }
  }
}

// One local-k step over a row range, for cooperative relaxation of the pivot
// tile: every participating thread owns a disjoint [i_begin, i_end) and a
// barrier separates consecutive k.  Stores are guarded — a thread must never
// write a cell it would only be rewriting with the same value, because other
// threads are concurrently reading row k.
template <typename T>
void relax_step(T* c, const T* a, const T* b, int32_t* pc, int bs, int k, int32_t k_global,
                int i_begin, int i_end) {
  const T* bk = b + static_cast<size_t>(k) * bs;
  for (int i = i_begin; i < i_end; ++i) {
    T* ci = c + static_cast<size_t>(i) * bs;
    const T aik = a[static_cast<size_t>(i) * bs + k];
    if (pc) {
      int32_t* pi = pc + static_cast<size_t>(i) * bs;
      for (int j = 0; j < bs; ++j) {
        const T cand = aik + bk[j];
        if (cand < ci[j]) [[unlikely]] {
          ci[j] = cand;
          pi[j] = k_global;
        }
      }
    } else {
      for (int j = 0; j < bs; ++j) {
        const T cand = aik + bk[j];
        if (cand < ci[j]) [[unlikely]] ci[j] = cand;
      }
    }
  }
}

// Randomized self-check: runs `tier` against the baseline on `trials`
// independent random tiles per aliasing shape (distinct, c==a, c==b,
// c==a==b), values a mix of +inf, negatives and positives, and reports the
// first bitwise discrepancy.
struct VariantMismatch {
  int trial = 0;
  std::string alias_shape;
  int i = 0, j = 0;
  double want = 0, got = 0;
  bool p_mismatch = false;
  int32_t p_want = 0, p_got = 0;
};

struct VariantCheckReport {
  KernelTier tier{};
  ElemKind kind{};
  int bs = 0;
  int trials = 0;
  bool with_paths = false;
  int shapes_tested = 0;
  std::optional<VariantMismatch> mismatch;
  bool ok() const { return !mismatch.has_value(); }
};

VariantCheckReport tile_relax_variant_check(KernelTier tier, ElemKind kind, int bs, int trials,
                                            uint64_t seed, bool with_paths);

}  // namespace bfw
