#pragma once

#include <utility>
#include <vector>

#include "gdsr/image.hpp"

namespace gdsr {

/// Integer super-resolution factor, one of 2, 4, 8, 16.
class ScaleFactor {
 public:
  /// Throws InvalidArgument for any other value.
  explicit ScaleFactor(int s);
  int value() const noexcept { return s_; }
  friend bool operator==(ScaleFactor, ScaleFactor) = default;

 private:
  int s_;
};

/// Keys cubic convolution kernel with a = -0.5.
double bicubic_kernel(double x);

/// One output sample of a separable resampler: clamped source indices and
/// weights summing to 1.
struct ResampleTaps {
  std::vector<std::size_t> index;
  std::vector<double> weight;
};

/// Taps for shrinking an axis of length `in` by s. Source coordinate of output
/// k is (k + 0.5) s - 0.5. With antialias the kernel is stretched by s
/// (4s taps), otherwise 4 taps.
std::vector<ResampleTaps> downsample_taps(std::size_t in, int s, bool antialias = true);

/// Taps for enlarging an axis of length `in` by s; source coordinate of output
/// k is (k + 0.5) / s - 0.5, 4 taps, no antialiasing.
std::vector<ResampleTaps> upsample_taps(std::size_t in, int s);

/// Throws InvalidArgument when either dimension is not divisible by s.
Image2D bicubic_downsample(const Image2D& img, ScaleFactor s, bool antialias = true);
Image2D bicubic_upsample(const Image2D& img, ScaleFactor s);

/// Largest top-left block whose sides are multiples of s.
Image2D crop_to_multiple(const Image2D& img, ScaleFactor s);

struct Degraded {
  DepthMap lr;
  DepthMap up;
};

/// lr = downsample(gt), up = upsample(lr); up has gt's dimensions. Samples
/// that the cubic overshoot pushes below zero are clamped to zero.
Degraded degrade(const DepthMap& gt, ScaleFactor s, bool antialias = true);

}  // namespace gdsr
