#include "bfw/kernel.hpp"

#include <algorithm>
#include <cstring>
#include <iterator>
#include <random>
#include <vector>

#include "bfw/errors.hpp"
#include "bfw/tiled.hpp"

namespace bfw {

const char* to_string(KernelTier t) {
  switch (t) {
    case KernelTier::kBaseline: return "baseline";
    case KernelTier::kVectorized: return "vectorized";
    case KernelTier::kVectorizedAligned: return "vectorized-aligned";
    case KernelTier::kBranchHinted: return "branch-hinted";
    case KernelTier::kUnrolled: return "unrolled";
  }
  return "?";
}

KernelTier parse_kernel_tier(const std::string& s) {
  for (KernelTier t : kTierLadder)
    if (s == to_string(t)) return t;
  throw ValidationError("tier: unknown kernel tier '" + s + "'");
}

const char* kernel_isa_info() {
#if defined(__AVX512F__)
  return "avx512";
#elif defined(__AVX2__)
  return "avx2";
#elif defined(__AVX__)
  return "avx";
#elif defined(__SSE2__) || defined(_M_X64) || defined(__x86_64__)
  return "sse2";
#elif defined(__ARM_NEON)
  return "neon";
#else
  return "scalar";
#endif
}

namespace {

// Random tile values: a blend of +inf (absent), negative and positive
// weights, so alias-order bugs that only show up with mid-pass improvements
// have something to bite on.
template <typename T>
void fill_random(T* t, int cells, std::mt19937_64& rng) {
  for (int c = 0; c < cells; ++c) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < 0.25)
      t[c] = kInf<T>;
    else
      t[c] = static_cast<T>(-20.0 + 120.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53));
  }
}

struct AliasShape {
  const char* name;
  bool a_is_c, b_is_c, b_is_a;
};

constexpr AliasShape kShapes[] = {
    {"distinct", false, false, false},
    {"c==a", true, false, false},
    {"c==b", false, true, false},
    {"c==a==b", true, true, false},
    {"a==b", false, false, true},
};

template <typename T>
VariantCheckReport run_check(KernelTier tier, int bs, int trials, uint64_t seed,
                             bool with_paths) {
  VariantCheckReport rep;
  rep.tier = tier;
  rep.kind = DistanceMatrix<T>::kind();
  rep.bs = bs;
  rep.trials = trials;
  rep.with_paths = with_paths;
  rep.shapes_tested = static_cast<int>(std::size(kShapes));

  const int cells = bs * bs;
  std::mt19937_64 rng(seed);
  detail::AlignedBuffer<T> c_ref(cells, 64), a_ref(cells, 64), b_ref(cells, 64);
  detail::AlignedBuffer<T> c_got(cells, 64), a_got(cells, 64), b_got(cells, 64);
  std::vector<int32_t> p_ref(cells), p_got(cells);

  for (int trial = 0; trial < trials && !rep.mismatch; ++trial) {
    for (const AliasShape& shape : kShapes) {
      fill_random(c_ref.data(), cells, rng);
      if (!shape.a_is_c) fill_random(a_ref.data(), cells, rng);
      if (!shape.b_is_c && !shape.b_is_a) fill_random(b_ref.data(), cells, rng);
      std::fill(p_ref.begin(), p_ref.end(), IntermediateMatrix::kNone);

      std::memcpy(c_got.data(), c_ref.data(), cells * sizeof(T));
      std::memcpy(a_got.data(), a_ref.data(), cells * sizeof(T));
      std::memcpy(b_got.data(), b_ref.data(), cells * sizeof(T));
      std::copy(p_ref.begin(), p_ref.end(), p_got.begin());

      const int32_t k_base = 1000;  // arbitrary, just has to match
      const T* ar = shape.a_is_c ? c_ref.data() : a_ref.data();
      const T* br = shape.b_is_c ? c_ref.data() : (shape.b_is_a ? a_ref.data() : b_ref.data());
      const T* ag = shape.a_is_c ? c_got.data() : a_got.data();
      const T* bg = shape.b_is_c ? c_got.data() : (shape.b_is_a ? a_got.data() : b_got.data());

      tile_relax<T>(c_ref.data(), ar, br, with_paths ? p_ref.data() : nullptr, bs, k_base,
                    KernelTier::kBaseline);
      tile_relax<T>(c_got.data(), ag, bg, with_paths ? p_got.data() : nullptr, bs, k_base,
                    tier);

      if (std::memcmp(c_ref.data(), c_got.data(), cells * sizeof(T)) == 0 &&
          (!with_paths || p_ref == p_got))
        continue;

      VariantMismatch mm;
      mm.trial = trial;
      mm.alias_shape = shape.name;
      for (int cix = 0; cix < cells; ++cix) {
        const bool d_diff =
            std::memcmp(&c_ref.data()[cix], &c_got.data()[cix], sizeof(T)) != 0;
        const bool p_diff = with_paths && p_ref[cix] != p_got[cix];
        if (d_diff || p_diff) {
          mm.i = cix / bs;
          mm.j = cix % bs;
          mm.want = static_cast<double>(c_ref.data()[cix]);
          mm.got = static_cast<double>(c_got.data()[cix]);
          mm.p_mismatch = p_diff;
          if (with_paths) {
            mm.p_want = p_ref[cix];
            mm.p_got = p_got[cix];
          }
          break;
        }
      }
      rep.mismatch = std::move(mm);
      break;
    }
  }
  return rep;
}

}  // namespace

VariantCheckReport tile_relax_variant_check(KernelTier tier, ElemKind kind, int bs, int trials,
                                            uint64_t seed, bool with_paths) {
  if (bs < 1) throw ValidationError("bs: must be >= 1");
  if (trials < 1) throw ValidationError("trials: must be >= 1");
  if (kind == ElemKind::kF32) return run_check<float>(tier, bs, trials, seed, with_paths);
  return run_check<double>(tier, bs, trials, seed, with_paths);
}

}  // namespace bfw
