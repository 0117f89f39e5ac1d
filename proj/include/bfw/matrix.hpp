#pragma once

#include <cstdint>
#include <cstring>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "bfw/errors.hpp"

namespace bfw {

enum class ElemKind : uint8_t { kF32 = 0, kF64 = 1 };

inline const char* to_string(ElemKind k) { return k == ElemKind::kF32 ? "f32" : "f64"; }

inline ElemKind parse_elem_kind(const std::string& s) {
  if (s == "f32") return ElemKind::kF32;
  if (s == "f64") return ElemKind::kF64;
  throw ValidationError("elem_kind: expected f32 or f64, got '" + s + "'");
}

template <typename T>
constexpr T kInf = std::numeric_limits<T>::infinity();

// Dimension guard for the matrix constructors below; the dimension member is
// declared before the cell store, so this throws before any allocation.
inline int checked_dim(int n) {
  if (n < 1) throw ValidationError("n: matrix dimension must be >= 1");
  return n;
}

// Dense row-major square matrix of edge/path weights.  Absent edges are
// IEEE +infinity, which the relaxation algebra absorbs for free: inf+x == inf
// and min(inf, x) == x.  No sentinel tests anywhere downstream rely on
// anything else.
template <typename T>
class DistanceMatrix {
  static_assert(std::is_floating_point_v<T>);

 public:
  using value_type = T;

  DistanceMatrix() = default;

  // Identity under min-plus: zero diagonal, +inf elsewhere.
  explicit DistanceMatrix(int n)
      : n_(checked_dim(n)), cells_(static_cast<size_t>(n) * n, kInf<T>) {
    for (int i = 0; i < n; ++i) cells_[static_cast<size_t>(i) * n + i] = T(0);
  }

  int n() const { return n_; }
  size_t size() const { return cells_.size(); }

  T& operator()(int i, int j) { return cells_[static_cast<size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return cells_[static_cast<size_t>(i) * n_ + j]; }

  T* data() { return cells_.data(); }
  const T* data() const { return cells_.data(); }

  static constexpr ElemKind kind() {
    return std::is_same_v<T, float> ? ElemKind::kF32 : ElemKind::kF64;
  }

 private:
  int n_ = 0;
  std::vector<T> cells_;
};

// Exact comparison, including the sign of zero.  Two runs that are supposed
// to be deterministic must agree at the byte level, not merely within an
// epsilon.
template <typename T>
bool bitwise_equal(const DistanceMatrix<T>& a, const DistanceMatrix<T>& b) {
  if (a.n() != b.n()) return false;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

// Returns {-1,-1} if equal, else the first differing cell in row-major order.
template <typename T>
std::pair<int, int> first_difference(const DistanceMatrix<T>& a, const DistanceMatrix<T>& b) {
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j)
      if (std::memcmp(&a(i, j), &b(i, j), sizeof(T)) != 0) return {i, j};
  return {-1, -1};
}

// Highest intermediate vertex on the recorded i->j path, or kNone when the
// best known path is the direct edge (or no path exists).
class IntermediateMatrix {
 public:
  static constexpr int32_t kNone = -1;

  IntermediateMatrix() = default;
  explicit IntermediateMatrix(int n)
      : n_(checked_dim(n)), cells_(static_cast<size_t>(n) * n, kNone) {}

  int n() const { return n_; }
  size_t size() const { return cells_.size(); }

  int32_t& operator()(int i, int j) { return cells_[static_cast<size_t>(i) * n_ + j]; }
  int32_t operator()(int i, int j) const { return cells_[static_cast<size_t>(i) * n_ + j]; }

  int32_t* data() { return cells_.data(); }
  const int32_t* data() const { return cells_.data(); }

  friend bool operator==(const IntermediateMatrix& a, const IntermediateMatrix& b) {
    return a.n_ == b.n_ && a.cells_ == b.cells_;
  }

 private:
  int n_ = 0;
  std::vector<int32_t> cells_;
};

using AnyDistanceMatrix = std::variant<DistanceMatrix<float>, DistanceMatrix<double>>;

inline ElemKind elem_kind(const AnyDistanceMatrix& m) {
  return std::visit([](const auto& x) { return x.kind(); }, m);
}

inline int matrix_n(const AnyDistanceMatrix& m) {
  return std::visit([](const auto& x) { return x.n(); }, m);
}

}  // namespace bfw
