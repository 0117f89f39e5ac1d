#include <cmath>
#include <cstring>
#include <vector>

#include "bfw/kernel.hpp"
#include "bfw/reference.hpp"
#include "bfw/tiled.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using bfw::DistanceMatrix;
using bfw::KernelTier;
using bfw::kInf;
using bfw::kTierLadder;

namespace {

// A 64-byte-aligned bs*bs tile seeded from a matrix (or a constant).
template <typename T>
struct Tile {
  bfw::detail::AlignedBuffer<T> buf;
  int bs;
  explicit Tile(int bs_) : buf(static_cast<size_t>(bs_) * bs_, 64), bs(bs_) {}
  Tile(const DistanceMatrix<T>& m) : Tile(m.n()) {
    std::memcpy(buf.data(), m.data(), sizeof(T) * m.size());
  }
  T* data() { return buf.data(); }
  T& at(int i, int j) { return buf.data()[i * bs + j]; }
  bool operator==(const Tile& o) const {
    return std::memcmp(buf.data(), o.buf.data(), sizeof(T) * buf.count()) == 0;
  }
};

template <typename T>
DistanceMatrix<T> relax_as_matrix(const DistanceMatrix<T>& m, KernelTier tier,
                                  bfw::IntermediateMatrix* p = nullptr) {
  Tile<T> t(m);
  std::vector<int32_t> pc;
  if (p) pc.assign(m.size(), bfw::IntermediateMatrix::kNone);
  bfw::tile_relax<T>(t.data(), t.data(), t.data(), p ? pc.data() : nullptr, m.n(), 0, tier);
  DistanceMatrix<T> out(m.n());
  std::memcpy(out.data(), t.data(), sizeof(T) * m.size());
  if (p)
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j) (*p)(i, j) = pc[i * m.n() + j];
  return out;
}

}  // namespace

TEST_CASE("tier names round-trip") {
  for (KernelTier t : kTierLadder) CHECK(bfw::parse_kernel_tier(bfw::to_string(t)) == t);
  CHECK_THROWS_AS(bfw::parse_kernel_tier("turbo"), bfw::ValidationError);
  CHECK(std::string(bfw::kernel_isa_info()).size() > 0);
}

TEST_CASE_TEMPLATE("single in-place tile equals the classic closure", T, float, double) {
  // 3-vertex worked example plus an isolated vertex to pad to 4x4.
  DistanceMatrix<T> m(4);
  m(0, 1) = T(5);
  m(1, 2) = T(3);
  m(0, 2) = T(10);
  auto want = bfw::fw_classic(m);
  for (KernelTier tier : kTierLadder) {
    CAPTURE(bfw::to_string(tier));
    bfw::IntermediateMatrix p(4);
    auto got = relax_as_matrix(m, tier, &p);
    CHECK(bfw::bitwise_equal(got, want.distances));
    CHECK(got(0, 2) == T(8));
    CHECK(p == want.intermediates);
  }
}

TEST_CASE("relaxation within a tile is sequential in k, with propagation") {
  // Chain 0->1->2->3 of unit edges plus a direct 0->3 of weight 10.  A
  // sequential-k in-place pass reaches 3 (each k step sees the previous
  // step's update); a one-shot min-plus product over the inputs only reaches
  // 10.  Any tier reordering k would be caught here.
  DistanceMatrix<float> m(4);
  m(0, 1) = 1;
  m(1, 2) = 1;
  m(2, 3) = 1;
  m(0, 3) = 10;
  CHECK(testutil::minplus_square_once(m)(0, 3) == 10.0f);
  for (KernelTier tier : kTierLadder) {
    CAPTURE(bfw::to_string(tier));
    CHECK(relax_as_matrix(m, tier)(0, 3) == 3.0f);
  }
}

TEST_CASE("all-infinite operand tiles leave c untouched") {
  const int bs = 16;
  auto cm = testutil::random_real_matrix<float>(bs, 0.3, 1, 100, 31);
  for (KernelTier tier : kTierLadder) {
    CAPTURE(bfw::to_string(tier));
    Tile<float> c(cm), a(cm), inf_tile(bs);
    for (int i = 0; i < bs * bs; ++i) inf_tile.data()[i] = kInf<float>;
    Tile<float> before(cm);
    bfw::tile_relax<float>(c.data(), a.data(), inf_tile.data(), nullptr, bs, 0, tier);
    CHECK(c == before);  // b all-inf: cand is always +inf
    Tile<float> c2(cm);
    bfw::tile_relax<float>(c2.data(), inf_tile.data(), a.data(), nullptr, bs, 0, tier);
    CHECK(c2 == before);  // a all-inf likewise
  }
}

TEST_CASE("already-closed aliased tile is a fixed point") {
  DistanceMatrix<float> m(2);
  m(0, 1) = 9;
  for (KernelTier tier : kTierLadder) {
    auto out = relax_as_matrix(m, tier);
    CHECK(bfw::bitwise_equal(out, m));
  }
}

TEST_CASE("zero tiles stay exactly zero through every tier") {
  const int bs = 8;
  for (KernelTier tier : kTierLadder) {
    Tile<float> c(bs), a(bs), b(bs);
    std::memset(c.data(), 0, sizeof(float) * bs * bs);
    std::memset(a.data(), 0, sizeof(float) * bs * bs);
    std::memset(b.data(), 0, sizeof(float) * bs * bs);
    std::vector<int32_t> pc(bs * bs, bfw::IntermediateMatrix::kNone);
    bfw::tile_relax<float>(c.data(), a.data(), b.data(), pc.data(), bs, 5, tier);
    for (int i = 0; i < bs * bs; ++i) {
      CHECK(c.data()[i] == 0.0f);
      CHECK(std::signbit(c.data()[i]) == false);  // 0+0 must not materialize -0.0
      CHECK(pc[i] == bfw::IntermediateMatrix::kNone);
    }
  }
}

TEST_CASE("path tracking is observation only: distances identical with and without") {
  auto m = testutil::random_real_matrix<double>(16, 0.3, 1, 100, 37);
  for (KernelTier tier : kTierLadder) {
    CAPTURE(bfw::to_string(tier));
    bfw::IntermediateMatrix p(16);
    auto with = relax_as_matrix(m, tier, &p);
    auto without = relax_as_matrix(m, tier);
    CHECK(bfw::bitwise_equal(with, without));
  }
}

TEST_CASE("randomized variant check: every tier matches baseline on every alias shape") {
  struct Budget {
    int bs, trials;
  };
  for (auto [bs, trials] : {Budget{8, 120}, Budget{16, 60}, Budget{32, 30}, Budget{64, 8},
                            Budget{128, 3}, Budget{48, 10}, Budget{5, 50}}) {
    for (KernelTier tier : {KernelTier::kVectorized, KernelTier::kVectorizedAligned,
                            KernelTier::kBranchHinted, KernelTier::kUnrolled}) {
      for (bfw::ElemKind kind : {bfw::ElemKind::kF32, bfw::ElemKind::kF64}) {
        for (bool paths : {false, true}) {
          auto rep = bfw::tile_relax_variant_check(tier, kind, bs, trials, 7777, paths);
          CAPTURE(bfw::to_string(tier));
          CAPTURE(bs);
          CAPTURE(paths);
          CHECK(rep.shapes_tested == 5);
          if (!rep.ok()) {
            auto& mm = *rep.mismatch;
            FAIL("mismatch tier=", bfw::to_string(tier), " kind=", bfw::to_string(kind),
                 " bs=", bs, " shape=", mm.alias_shape, " trial=", mm.trial, " cell=(", mm.i,
                 ",", mm.j, ") want=", mm.want, " got=", mm.got, " p_mismatch=", mm.p_mismatch);
          }
        }
      }
    }
  }
}

TEST_CASE("variant check heavy spot: unrolled f32 bs=32, 1000 tiles") {
  auto rep =
      bfw::tile_relax_variant_check(KernelTier::kUnrolled, bfw::ElemKind::kF32, 32, 1000, 1, true);
  CHECK(rep.ok());
  CHECK(rep.trials == 1000);
}

TEST_CASE("variant check validates its arguments") {
  CHECK_THROWS_AS(
      bfw::tile_relax_variant_check(KernelTier::kUnrolled, bfw::ElemKind::kF32, 0, 1, 1, false),
      bfw::ValidationError);
  CHECK_THROWS_AS(
      bfw::tile_relax_variant_check(KernelTier::kUnrolled, bfw::ElemKind::kF32, 8, 0, 1, false),
      bfw::ValidationError);
}

TEST_CASE("cooperative row-range steps compose to the whole-tile baseline") {
  const int bs = 16;
  auto m = testutil::random_real_matrix<float>(bs, 0.3, 1, 100, 41);
  Tile<float> whole(m);
  std::vector<int32_t> p_whole(bs * bs, -1);
  bfw::tile_relax<float>(whole.data(), whole.data(), whole.data(), p_whole.data(), bs, 0,
                         KernelTier::kBaseline);

  Tile<float> split(m);
  std::vector<int32_t> p_split(bs * bs, -1);
  for (int k = 0; k < bs; ++k) {
    // two disjoint row ranges, processed one after the other within step k
    bfw::relax_step<float>(split.data(), split.data(), split.data(), p_split.data(), bs, k, k,
                           0, bs / 2);
    bfw::relax_step<float>(split.data(), split.data(), split.data(), p_split.data(), bs, k, k,
                           bs / 2, bs);
  }
  CHECK(whole == split);
  CHECK(p_whole == p_split);
}
