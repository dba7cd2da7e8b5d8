#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gdsr/error.hpp"

namespace gdsr {

/// Dense row-major grid of doubles. Carrier for depth maps, luminance,
/// DCT coefficients and single feature channels.
class Image2D {
 public:
  Image2D() = default;
  Image2D(std::size_t height, std::size_t width, double fill = 0.0);
  /// Throws when samples.size() != height * width or any sample is not finite.
  Image2D(std::size_t height, std::size_t width, std::vector<double> samples);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  double& operator()(std::size_t row, std::size_t col) noexcept {
    return samples_[row * width_ + col];
  }
  double operator()(std::size_t row, std::size_t col) const noexcept {
    return samples_[row * width_ + col];
  }

  std::span<double> row(std::size_t r) noexcept {
    return {samples_.data() + r * width_, width_};
  }
  std::span<const double> row(std::size_t r) const noexcept {
    return {samples_.data() + r * width_, width_};
  }

  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }

  bool same_shape(const Image2D& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const noexcept;

  /// Copy of the top-left rows x cols block.
  Image2D crop(std::size_t rows, std::size_t cols) const;

  friend bool operator==(const Image2D&, const Image2D&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> samples_;
};

/// Throws DimensionError unless a and b share (M, N). `what` names the caller.
void require_same_shape(const Image2D& a, const Image2D& b, const char* what);

std::string shape_string(const Image2D& img);

enum class BinaryOp { add, sub, mul, div };

/// result[i,j] = op(a[i,j], b[i,j]). Division by a zero sample throws.
Image2D elementwise_combine(const Image2D& a, const Image2D& b, BinaryOp op);

Image2D scale(const Image2D& img, double factor);
Image2D add_scalar(const Image2D& img, double offset);

double max_abs(const Image2D& img);
double sum_squares(const Image2D& img);
double mean(const Image2D& img);
/// max |a - b| over all samples.
double max_abs_diff(const Image2D& a, const Image2D& b);

/// Ordered stack of equally sized channels.
class MultiChannelImage {
 public:
  MultiChannelImage() = default;
  /// Throws when the list is empty or the channels disagree on shape.
  explicit MultiChannelImage(std::vector<Image2D> channels);

  std::size_t channel_count() const noexcept { return channels_.size(); }
  std::size_t height() const noexcept { return channels_.empty() ? 0 : channels_.front().height(); }
  std::size_t width() const noexcept { return channels_.empty() ? 0 : channels_.front().width(); }

  const Image2D& operator[](std::size_t c) const { return channels_.at(c); }
  Image2D& operator[](std::size_t c) { return channels_.at(c); }
  const std::vector<Image2D>& channels() const noexcept { return channels_; }

  bool same_shape(const MultiChannelImage& other) const noexcept {
    return channel_count() == other.channel_count() && height() == other.height() &&
           width() == other.width();
  }

 private:
  std::vector<Image2D> channels_;
};

/// Three planes with samples in [0, 1].
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(Image2D red, Image2D green, Image2D blue);

  const Image2D& red() const noexcept { return red_; }
  const Image2D& green() const noexcept { return green_; }
  const Image2D& blue() const noexcept { return blue_; }
  std::size_t height() const noexcept { return red_.height(); }
  std::size_t width() const noexcept { return red_.width(); }

  RgbImage crop(std::size_t rows, std::size_t cols) const;

 private:
  Image2D red_, green_, blue_;
};

/// Depth samples plus the multiplier taking stored values to metric units.
class DepthMap {
 public:
  DepthMap() = default;
  /// Throws on unit_scale <= 0 or negative samples.
  DepthMap(Image2D data, double unit_scale = 1.0);

  const Image2D& data() const noexcept { return data_; }
  double unit_scale() const noexcept { return unit_scale_; }
  std::size_t height() const noexcept { return data_.height(); }
  std::size_t width() const noexcept { return data_.width(); }

 private:
  Image2D data_;
  double unit_scale_ = 1.0;
};

/// Integer samples at an I/O boundary (8- or 16-bit range).
struct QuantizedImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::uint32_t max_value = 255;
  std::vector<std::uint16_t> samples;

  friend bool operator==(const QuantizedImage&, const QuantizedImage&) = default;
};

/// round(sample * max_value), half away from zero, clamped to [0, max_value].
/// With strict set, samples outside [0, 1] throw instead of being clamped.
QuantizedImage quantize(const Image2D& img, std::uint32_t max_value, bool strict = false);

/// sample / max_value.
Image2D dequantize(const QuantizedImage& q);

}  // namespace gdsr
