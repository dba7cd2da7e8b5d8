#include "gdsr/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gdsr {

Stencil::Stencil(std::size_t height, std::size_t width, std::vector<double> weights)
    : height_(height), width_(width), weights_(std::move(weights)) {
  if (height % 2 == 0 || width % 2 == 0) throw InvalidArgument("Stencil: dimensions must be odd");
  if (weights_.size() != height * width)
    throw DimensionError("Stencil: weight count does not match height*width");
  for (double w : weights_)
    if (!std::isfinite(w)) throw InvalidArgument("Stencil: non-finite weight");
}

double Stencil::sum() const noexcept { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

bool Stencil::flip_symmetric(double tol) const noexcept {
  for (std::size_t r = 0; r < height_; ++r)
    for (std::size_t c = 0; c < width_; ++c) {
      const double w = (*this)(r, c);
      if (std::abs(w - (*this)(height_ - 1 - r, c)) > tol) return false;
      if (std::abs(w - (*this)(r, width_ - 1 - c)) > tol) return false;
    }
  return true;
}

Image2D convolve_reflect(const Image2D& img, const Stencil& stencil) {
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  const auto ry = static_cast<std::ptrdiff_t>(stencil.radius_rows());
  const auto rx = static_cast<std::ptrdiff_t>(stencil.radius_cols());
  // col_index[j + b] is the source column of tap b for output column j
  std::vector<std::size_t> col_index(w + 2 * static_cast<std::size_t>(rx));
  for (std::size_t k = 0; k < col_index.size(); ++k)
    col_index[k] = reflect_index(static_cast<std::ptrdiff_t>(k) - rx, w);

  Image2D out(h, w);
  const auto rows = static_cast<std::ptrdiff_t>(h);
#pragma omp parallel
  {
    std::vector<double> line(col_index.size());
    std::vector<double> acc(w);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t a = 0; a < stencil.height(); ++a) {
        const auto src = img.row(reflect_index(i + static_cast<std::ptrdiff_t>(a) - ry, h));
        for (std::size_t k = 0; k < line.size(); ++k) line[k] = src[col_index[k]];
        for (std::size_t b = 0; b < stencil.width(); ++b) {
          const double k = stencil(a, b);
          if (k == 0.0) continue;
          const double* in = line.data() + b;
          for (std::size_t j = 0; j < w; ++j) acc[j] += k * in[j];
        }
      }
      std::copy(acc.begin(), acc.end(), out.row(static_cast<std::size_t>(i)).begin());
    }
  }
  return out;
}

Image2D convolve_reflect_serial(const Image2D& img, const Stencil& stencil) {
  const std::size_t ry = stencil.radius_rows();
  const std::size_t rx = stencil.radius_cols();
  const std::size_t ph = img.height() + 2 * ry;
  const std::size_t pw = img.width() + 2 * rx;
  std::vector<double> padded(ph * pw);
  for (std::size_t r = 0; r < ph; ++r)
    for (std::size_t c = 0; c < pw; ++c)
      padded[r * pw + c] = img(reflect_index(static_cast<std::ptrdiff_t>(r) - static_cast<std::ptrdiff_t>(ry), img.height()),
                               reflect_index(static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(rx), img.width()));
  Image2D out(img.height(), img.width());
  for (std::size_t i = 0; i < img.height(); ++i)
    for (std::size_t j = 0; j < img.width(); ++j) {
      double acc = 0.0;
      for (std::size_t a = 0; a < stencil.height(); ++a)
        for (std::size_t b = 0; b < stencil.width(); ++b)
          if (stencil(a, b) != 0.0) acc += stencil(a, b) * padded[(i + a) * pw + (j + b)];
      out(i, j) = acc;
    }
  return out;
}

}  // namespace gdsr
