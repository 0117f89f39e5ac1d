#include "bfw/graph_gen.hpp"

#include <cmath>
#include <random>

namespace bfw {

void GraphSpec::validate() const {
  if (n < 1) throw ValidationError("n: must be >= 1, got " + std::to_string(n));
  if (n > (int64_t(1) << 20))
    throw ValidationError("n: must be <= 2^20, got " + std::to_string(n));
  if (!(null_fraction >= 0.0 && null_fraction <= 1.0))
    throw ValidationError("null_fraction: must lie in [0, 1], got " +
                          std::to_string(null_fraction));
  if (!std::isfinite(weight_min) || !std::isfinite(weight_max))
    throw ValidationError("weight_min/weight_max: must be finite");
  if (weight_min < 0)
    throw ValidationError("weight_min: must be >= 0 (negative weights are accepted on "
                          "input, never generated)");
  if (weight_min > weight_max)
    throw ValidationError("weight_min: must be <= weight_max");
  if (std::ceil(weight_min) > std::floor(weight_max))
    throw ValidationError("weight_min/weight_max: [" + std::to_string(weight_min) + ", " +
                          std::to_string(weight_max) + "] contains no integer weights");
}

namespace {

// uniform in [0, 1).  std::uniform_real_distribution is not specified bit-for-bit
// across standard libraries; this mapping is, given the mt19937_64 stream.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

template <typename T>
DistanceMatrix<T> generate_graph(const GraphSpec& spec) {
  spec.validate();
  const int n = static_cast<int>(spec.n);
  DistanceMatrix<T> m(n);
  std::mt19937_64 rng(spec.seed);
  // Weights come from the integer lattice inside [weight_min, weight_max]:
  // integer-valued weights keep every relaxation sum exact in f32 and f64, so
  // solve output is comparable bit for bit against the reference no matter
  // how the relaxations were reordered.  Modulo keeps the draw portable; the
  // bias at practical ranges (2^64 mod 100) is immeasurable.
  const int64_t lo = static_cast<int64_t>(std::ceil(spec.weight_min));
  const uint64_t lattice =
      static_cast<uint64_t>(static_cast<int64_t>(std::floor(spec.weight_max)) - lo) + 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;  // diagonal stays 0, consumes no draws
      if (unit_uniform(rng) < spec.null_fraction) continue;  // absent edge
      m(i, j) = static_cast<T>(lo + static_cast<int64_t>(rng() % lattice));
    }
  }
  return m;
}

template DistanceMatrix<float> generate_graph<float>(const GraphSpec&);
template DistanceMatrix<double> generate_graph<double>(const GraphSpec&);

AnyDistanceMatrix generate_graph(const GraphSpec& spec, ElemKind kind) {
  if (kind == ElemKind::kF32) return generate_graph<float>(spec);
  return generate_graph<double>(spec);
}

}  // namespace bfw
