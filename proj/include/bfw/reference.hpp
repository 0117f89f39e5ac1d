#pragma once

#include <span>
#include <vector>

#include "bfw/matrix.hpp"

namespace bfw {

template <typename T>
struct ClosureResult {
  DistanceMatrix<T> distances;
  IntermediateMatrix intermediates;
};

// Classic in-place Floyd-Warshall, k outermost then i then j, all ascending.
// A cell is rewritten only on strict improvement (cand < current), so ties
// keep the earlier path and P records the last k that strictly improved the
// cell.  This exact update order is the semantics every blocked/tiered
// variant must reproduce bit for bit.
template <typename T>
ClosureResult<T> fw_classic(const DistanceMatrix<T>& d);

// Expands the P matrix into an explicit vertex sequence i .. j.
// Returns {i} when i == j, {} when j is unreachable, else a path whose hops
// are all edges of the original matrix.  Throws CorruptPathMatrix when P is
// inconsistent (intermediate out of range, equal to an endpoint, or the
// expansion fails to terminate within the n-vertex bound).
template <typename T>
std::vector<int> reconstruct_path(const IntermediateMatrix& p, const DistanceMatrix<T>& closed,
                                  int i, int j);

// Sum of edge weights along an explicit path over the *original* matrix.
// Empty path costs +inf, single vertex costs 0.  Throws InvalidPath if a hop
// is not a (finite) edge.
template <typename T>
T path_cost(const DistanceMatrix<T>& original, std::span<const int> path);

// After closure, a negative diagonal cell certifies a negative cycle through
// that vertex.
template <typename T>
bool has_negative_cycle(const DistanceMatrix<T>& closed);

extern template ClosureResult<float> fw_classic<float>(const DistanceMatrix<float>&);
extern template ClosureResult<double> fw_classic<double>(const DistanceMatrix<double>&);
extern template std::vector<int> reconstruct_path<float>(const IntermediateMatrix&,
                                                         const DistanceMatrix<float>&, int, int);
extern template std::vector<int> reconstruct_path<double>(const IntermediateMatrix&,
                                                          const DistanceMatrix<double>&, int, int);
extern template float path_cost<float>(const DistanceMatrix<float>&, std::span<const int>);
extern template double path_cost<double>(const DistanceMatrix<double>&, std::span<const int>);
extern template bool has_negative_cycle<float>(const DistanceMatrix<float>&);
extern template bool has_negative_cycle<double>(const DistanceMatrix<double>&);

}  // namespace bfw
