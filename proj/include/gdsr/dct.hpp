#pragma once

#include <cstddef>

#include "gdsr/image.hpp"

namespace gdsr {

enum class DctDirection { forward, inverse };
enum class DctPath { naive, fast };

/// Largest M*N the direct-summation path accepts.
inline constexpr std::size_t kNaiveDctMaxSamples = std::size_t{1} << 20;

/// Orthonormal separable 2-D DCT-II (forward) / DCT-III (inverse) for a fixed
/// M x N grid. Rows are transformed first, then columns. Immutable and safe
/// to execute from several threads at once.
class DctPlan {
 public:
  DctPlan(std::size_t rows, std::size_t cols, DctDirection direction, DctPath path = DctPath::fast);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  DctDirection direction() const noexcept { return direction_; }
  DctPath path() const noexcept { return path_; }

  /// Throws DimensionError when img is not rows x cols.
  Image2D execute(const Image2D& img) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  DctDirection direction_;
  DctPath path_;
};

Image2D dct2_forward(const Image2D& img);
Image2D dct2_inverse(const Image2D& coeffs);

/// Direct O(MN(M+N)) summation with the same normalization as the fast path.
/// Serial; used as the correctness oracle. Throws when M*N > kNaiveDctMaxSamples.
Image2D dct2_naive(const Image2D& img, DctDirection direction);

}  // namespace gdsr
