#pragma once

#include <cstddef>
#include <vector>

#include "gdsr/image.hpp"

namespace gdsr {

/// Odd-sized 2-D filter stencil, row-major, centered on its middle tap.
class Stencil {
 public:
  Stencil() : Stencil(1, 1, {1.0}) {}
  Stencil(std::size_t height, std::size_t width, std::vector<double> weights);

  static Stencil identity() { return Stencil(); }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t radius_rows() const noexcept { return height_ / 2; }
  std::size_t radius_cols() const noexcept { return width_ / 2; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return weights_[r * width_ + c]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double sum() const noexcept;
  /// True when the stencil equals its horizontal and its vertical mirror image.
  bool flip_symmetric(double tol = 0.0) const noexcept;

  friend bool operator==(const Stencil&, const Stencil&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> weights_;
};

/// Maps any integer index onto [0, n) by half-sample symmetric reflection
/// (... b a | a b c ... c | c b ...), repeating as often as needed.
inline std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) noexcept {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  return m < static_cast<std::ptrdiff_t>(n) ? static_cast<std::size_t>(m)
                                            : static_cast<std::size_t>(period - 1 - m);
}

/// out[i,j] = sum_{a,b} s[a,b] * x[i + a - ry, j + b - rx] with half-sample
/// reflection at the borders. The stencil is applied without flipping
/// (correlation form), matching CNN convolution layers. Rows run in parallel.
Image2D convolve_reflect(const Image2D& img, const Stencil& stencil);

/// Single-threaded reference for convolve_reflect; same arithmetic order.
Image2D convolve_reflect_serial(const Image2D& img, const Stencil& stencil);

}  // namespace gdsr
