#include "bfw/reference.hpp"

#include <string>

namespace bfw {

template <typename T>
ClosureResult<T> fw_classic(const DistanceMatrix<T>& d) {
  const int n = d.n();
  ClosureResult<T> out{d, IntermediateMatrix(n)};
  DistanceMatrix<T>& m = out.distances;
  IntermediateMatrix& p = out.intermediates;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const T dik = m(i, k);
      for (int j = 0; j < n; ++j) {
        const T cand = dik + m(k, j);
        if (cand < m(i, j)) {
          m(i, j) = cand;
          p(i, j) = k;
        }
      }
    }
  }
  return out;
}

template ClosureResult<float> fw_classic<float>(const DistanceMatrix<float>&);
template ClosureResult<double> fw_classic<double>(const DistanceMatrix<double>&);

namespace {

void expand(const IntermediateMatrix& p, int i, int j, std::vector<int>& out, int& budget) {
  if (--budget < 0)
    throw CorruptPathMatrix("path expansion exceeded the n-vertex bound; P has a cycle");
  const int32_t k = p(i, j);
  if (k == IntermediateMatrix::kNone) {
    out.push_back(j);  // direct edge i -> j
    return;
  }
  if (k < 0 || k >= p.n() || k == i || k == j)
    throw CorruptPathMatrix("intermediate " + std::to_string(k) + " invalid for pair (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
  expand(p, i, k, out, budget);
  expand(p, k, j, out, budget);
}

}  // namespace

template <typename T>
std::vector<int> reconstruct_path(const IntermediateMatrix& p, const DistanceMatrix<T>& closed,
                                  int i, int j) {
  if (i < 0 || i >= p.n() || j < 0 || j >= p.n())
    throw ValidationError("reconstruct_path: endpoint out of range");
  if (i == j) return {i};
  if (closed(i, j) == kInf<T>) return {};
  std::vector<int> out;
  out.push_back(i);
  // A simple path visits at most n vertices, so a valid expansion tree has
  // fewer than 2n nodes.  Anything deeper means P is self-referential.
  int budget = 2 * p.n();
  expand(p, i, j, out, budget);
  return out;
}

template std::vector<int> reconstruct_path<float>(const IntermediateMatrix&,
                                                  const DistanceMatrix<float>&, int, int);
template std::vector<int> reconstruct_path<double>(const IntermediateMatrix&,
                                                   const DistanceMatrix<double>&, int, int);

template <typename T>
T path_cost(const DistanceMatrix<T>& original, std::span<const int> path) {
  if (path.empty()) return kInf<T>;
  for (int v : path)
    if (v < 0 || v >= original.n()) throw InvalidPath("vertex " + std::to_string(v) + " out of range");
  T total(0);
  for (size_t h = 0; h + 1 < path.size(); ++h) {
    const T w = original(path[h], path[h + 1]);
    if (w == kInf<T>)
      throw InvalidPath("hop " + std::to_string(path[h]) + " -> " + std::to_string(path[h + 1]) +
                        " is not an edge");
    total += w;
  }
  return total;
}

template float path_cost<float>(const DistanceMatrix<float>&, std::span<const int>);
template double path_cost<double>(const DistanceMatrix<double>&, std::span<const int>);

template <typename T>
bool has_negative_cycle(const DistanceMatrix<T>& closed) {
  for (int i = 0; i < closed.n(); ++i)
    if (closed(i, i) < T(0)) return true;
  return false;
}

template bool has_negative_cycle<float>(const DistanceMatrix<float>&);
template bool has_negative_cycle<double>(const DistanceMatrix<double>&);

}  // namespace bfw
