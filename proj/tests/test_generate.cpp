#include <cmath>
#include <string>

#include "bfw/errors.hpp"
#include "bfw/graph_gen.hpp"
#include "doctest.h"

using bfw::DistanceMatrix;
using bfw::GraphSpec;
using bfw::kInf;

namespace {

GraphSpec spec(int64_t n, double nf = 0.30, double lo = 1.0, double hi = 100.0,
               uint64_t seed = 1) {
  GraphSpec s;
  s.n = n;
  s.null_fraction = nf;
  s.weight_min = lo;
  s.weight_max = hi;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE_TEMPLATE("generator is deterministic per spec", T, float, double) {
  const GraphSpec s = spec(64, 0.3, 1, 100, 12345);
  auto a = bfw::generate_graph<T>(s);
  auto b = bfw::generate_graph<T>(s);
  CHECK(bfw::bitwise_equal(a, b));

  GraphSpec other = s;
  other.seed = 12346;
  auto c = bfw::generate_graph<T>(other);
  CHECK_FALSE(bfw::bitwise_equal(a, c));
}

TEST_CASE("null_fraction extremes") {
  auto dense = bfw::generate_graph<float>(spec(16, 0.0, 3.0, 3.0));
  auto empty = bfw::generate_graph<float>(spec(16, 1.0));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      if (i == j) {
        CHECK(dense(i, j) == 0.0f);
        CHECK(empty(i, j) == 0.0f);
      } else {
        CHECK(dense(i, j) == 3.0f);  // wmin == wmax pins the weight
        CHECK(empty(i, j) == kInf<float>);
      }
    }
}

TEST_CASE("empirical edge-absence rate matches null_fraction") {
  const int n = 1024;
  auto m = bfw::generate_graph<double>(spec(n, 0.30, 1, 100, 42));
  int64_t absent = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && m(i, j) == kInf<double>) ++absent;
  const double frac = double(absent) / (double(n) * n - n);
  CHECK(frac == doctest::Approx(0.30).epsilon(0.05));  // ~1M draws, generous CI
}

TEST_CASE_TEMPLATE("present weights are integers inside [wmin, wmax]", T, float, double) {
  auto m = bfw::generate_graph<T>(spec(64, 0.25, 2.5, 7.5, 7));
  bool hit_lo = false, hit_hi = false;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      if (i == j) {
        CHECK(m(i, j) == T(0));
        continue;
      }
      const T w = m(i, j);
      if (w == kInf<T>) continue;
      CHECK(w >= T(3));  // integer lattice of [2.5, 7.5] is {3..7}
      CHECK(w <= T(7));
      CHECK(std::floor(w) == w);
      hit_lo = hit_lo || w == T(3);
      hit_hi = hit_hi || w == T(7);
    }
  CHECK(hit_lo);  // ~3k draws over 5 values: both endpoints occur
  CHECK(hit_hi);
}

TEST_CASE("spec validation names the offending field") {
  auto msg_contains = [](auto fn, const std::string& field) {
    try {
      fn();
    } catch (const bfw::ValidationError& e) {
      return std::string(e.what()).find(field) != std::string::npos;
    }
    return false;
  };
  CHECK(msg_contains([] { bfw::generate_graph<float>(spec(0)); }, "n"));
  CHECK(msg_contains([] { bfw::generate_graph<float>(spec(8, 1.5)); }, "null_fraction"));
  CHECK(msg_contains([] { bfw::generate_graph<float>(spec(8, -0.1)); }, "null_fraction"));
  CHECK(msg_contains([] { bfw::generate_graph<float>(spec(8, 0.3, 9.0, 4.0)); }, "weight"));
  CHECK(msg_contains([] { bfw::generate_graph<float>(spec(8, 0.3, -1.0, 4.0)); }, "weight_min"));
  const double nan = std::nan("");
  CHECK(msg_contains([nan] { bfw::generate_graph<float>(spec(8, 0.3, nan, 4.0)); }, "weight"));
  CHECK(msg_contains([] { bfw::generate_graph<float>(spec(8, 0.3, 0.4, 0.9)); }, "integer"));
  CHECK(msg_contains([] { bfw::generate_graph<float>(spec(int64_t(1) << 21)); }, "n"));
}

TEST_CASE("kind-dispatched generation matches the typed entry points") {
  const GraphSpec s = spec(12, 0.4, 1, 9, 99);
  auto any32 = bfw::generate_graph(s, bfw::ElemKind::kF32);
  auto any64 = bfw::generate_graph(s, bfw::ElemKind::kF64);
  CHECK(bfw::elem_kind(any32) == bfw::ElemKind::kF32);
  CHECK(bfw::elem_kind(any64) == bfw::ElemKind::kF64);
  CHECK(bfw::bitwise_equal(std::get<DistanceMatrix<float>>(any32), bfw::generate_graph<float>(s)));
  CHECK(
      bfw::bitwise_equal(std::get<DistanceMatrix<double>>(any64), bfw::generate_graph<double>(s)));
}

TEST_CASE("f32 instance is the f64 stream narrowed, not a different stream") {
  // Same seed must make the same edge-presence decisions in both kinds.
  const GraphSpec s = spec(32, 0.5, 1, 100, 5);
  auto a = bfw::generate_graph<float>(s);
  auto b = bfw::generate_graph<double>(s);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      CHECK((a(i, j) == kInf<float>) == (b(i, j) == kInf<double>));
}
