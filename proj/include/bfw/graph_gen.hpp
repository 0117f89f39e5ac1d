#pragma once

#include <cstdint>

#include "bfw/matrix.hpp"

namespace bfw {

// Parameters for the random instance generator.  Defaults mirror the usual
// benchmark setup: ~30% missing edges, weights uniform in [1, 100].
struct GraphSpec {
  int64_t n = 0;
  double null_fraction = 0.30;  // probability an off-diagonal edge is absent
  double weight_min = 1.0;
  double weight_max = 100.0;
  uint64_t seed = 1;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

// Deterministic: same spec => same matrix, bit for bit, on every platform.
// Diagonal is always 0, off-diagonal cells are +inf with probability
// null_fraction, otherwise uniform over the integers in
// [weight_min, weight_max].  Integer-valued weights keep closure sums exact
// in both element kinds at practical scales, which is what makes bitwise
// verification against the reference meaningful.  Cells are drawn in
// row-major order; the draw-count per cell is fixed, so the stream position
// never depends on earlier outcomes' values beyond the documented
// one-or-two draws (edge test, then weight only if present).
template <typename T>
DistanceMatrix<T> generate_graph(const GraphSpec& spec);

AnyDistanceMatrix generate_graph(const GraphSpec& spec, ElemKind kind);

extern template DistanceMatrix<float> generate_graph<float>(const GraphSpec&);
extern template DistanceMatrix<double> generate_graph<double>(const GraphSpec&);

}  // namespace bfw
