#pragma once

#include <cstddef>
#include <cstdint>
#include <new>
#include <utility>

#include "bfw/errors.hpp"
#include "bfw/matrix.hpp"

namespace bfw {

namespace detail {

// Over-aligned heap array.  std::vector can't take a runtime alignment, so
// this wraps aligned operator new directly.
template <typename T>
class AlignedBuffer {
 public:
  AlignedBuffer() = default;
  AlignedBuffer(size_t count, size_t align)
      : ptr_(static_cast<T*>(::operator new(count * sizeof(T), std::align_val_t(align)))),
        count_(count),
        align_(align) {}
  AlignedBuffer(AlignedBuffer&& o) noexcept
      : ptr_(std::exchange(o.ptr_, nullptr)),
        count_(std::exchange(o.count_, 0)),
        align_(std::exchange(o.align_, 0)) {}
  AlignedBuffer& operator=(AlignedBuffer&& o) noexcept {
    if (this != &o) {
      release();
      ptr_ = std::exchange(o.ptr_, nullptr);
      count_ = std::exchange(o.count_, 0);
      align_ = std::exchange(o.align_, 0);
    }
    return *this;
  }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  ~AlignedBuffer() { release(); }

  T* data() { return ptr_; }
  const T* data() const { return ptr_; }
  size_t count() const { return count_; }

 private:
  void release() {
    if (ptr_) ::operator delete(ptr_, std::align_val_t(align_));
  }
  T* ptr_ = nullptr;
  size_t count_ = 0;
  size_t align_ = 0;
};

}  // namespace detail

// Block-major storage: an R x R grid of bs x bs row-major tiles, each tile
// contiguous and starting on an `align`-byte boundary.  Global cell (i,j)
// lives in tile (i/bs, j/bs) at local offset (i%bs)*bs + (j%bs).
template <typename T>
class TiledMatrix {
 public:
  static constexpr size_t kDefaultAlign = 64;

  TiledMatrix() = default;

  TiledMatrix(int n, int bs, size_t align = kDefaultAlign)
      : n_(n), bs_(bs), r_(check_divides(n, bs)), align_(check_align(align)) {
    const size_t tile_bytes = static_cast<size_t>(bs) * bs * sizeof(T);
    tile_stride_ = ((tile_bytes + align_ - 1) / align_ * align_) / sizeof(T);
    buf_ = detail::AlignedBuffer<T>(static_cast<size_t>(r_) * r_ * tile_stride_, align_);
  }

  int n() const { return n_; }
  int bs() const { return bs_; }
  int rounds() const { return r_; }
  size_t alignment() const { return align_; }

  T* tile(int bi, int bj) {
    return buf_.data() + (static_cast<size_t>(bi) * r_ + bj) * tile_stride_;
  }
  const T* tile(int bi, int bj) const {
    return buf_.data() + (static_cast<size_t>(bi) * r_ + bj) * tile_stride_;
  }

  void fill(T v) {
    for (int bi = 0; bi < r_; ++bi)
      for (int bj = 0; bj < r_; ++bj) {
        T* t = tile(bi, bj);
        for (int c = 0; c < bs_ * bs_; ++c) t[c] = v;
      }
  }

  void from_row_major(const T* src) {
    for (int bi = 0; bi < r_; ++bi)
      for (int bj = 0; bj < r_; ++bj) {
        T* t = tile(bi, bj);
        for (int li = 0; li < bs_; ++li) {
          const T* row = src + static_cast<size_t>(bi * bs_ + li) * n_ + bj * bs_;
          for (int lj = 0; lj < bs_; ++lj) t[li * bs_ + lj] = row[lj];
        }
      }
  }

  void to_row_major(T* dst) const {
    for (int bi = 0; bi < r_; ++bi)
      for (int bj = 0; bj < r_; ++bj) {
        const T* t = tile(bi, bj);
        for (int li = 0; li < bs_; ++li) {
          T* row = dst + static_cast<size_t>(bi * bs_ + li) * n_ + bj * bs_;
          for (int lj = 0; lj < bs_; ++lj) row[lj] = t[li * bs_ + lj];
        }
      }
  }

 private:
  static int check_divides(int n, int bs) {
    if (n < 1) throw ValidationError("n: must be >= 1");
    if (bs < 1) throw ValidationError("bs: must be >= 1");
    if (n % bs != 0) throw BlockSizeError(n, bs);
    return n / bs;
  }
  static size_t check_align(size_t align) {
    if (align == 0 || (align & (align - 1)) != 0)
      throw ValidationError("align: must be a power of two");
    return align < alignof(T) ? alignof(T) : align;
  }

  int n_ = 0, bs_ = 0, r_ = 0;
  size_t align_ = 0, tile_stride_ = 0;
  detail::AlignedBuffer<T> buf_;
};

template <typename T>
TiledMatrix<T> to_tiled(const DistanceMatrix<T>& m, int bs,
                        size_t align = TiledMatrix<T>::kDefaultAlign) {
  TiledMatrix<T> t(m.n(), bs, align);
  t.from_row_major(m.data());
  return t;
}

template <typename T>
DistanceMatrix<T> from_tiled(const TiledMatrix<T>& t) {
  DistanceMatrix<T> m(t.n());
  t.to_row_major(m.data());
  return m;
}

inline TiledMatrix<int32_t> to_tiled(const IntermediateMatrix& m, int bs,
                                     size_t align = TiledMatrix<int32_t>::kDefaultAlign) {
  TiledMatrix<int32_t> t(m.n(), bs, align);
  t.from_row_major(m.data());
  return t;
}

inline IntermediateMatrix paths_from_tiled(const TiledMatrix<int32_t>& t) {
  IntermediateMatrix m(t.n());
  t.to_row_major(m.data());
  return m;
}

}  // namespace bfw
