#include "gdsr/resample.hpp"

#include <algorithm>
#include <cmath>

namespace gdsr {

namespace {

constexpr double kKeysA = -0.5;

ResampleTaps make_taps(double center, double stretch, std::ptrdiff_t first, std::ptrdiff_t last, std::size_t in) {
  ResampleTaps taps;
  double total = 0.0;
  for (std::ptrdiff_t t = first; t <= last; ++t) {
    const double w = bicubic_kernel((static_cast<double>(t) - center) / stretch);
    if (w == 0.0) continue;
    const auto clamped = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(t, 0, static_cast<std::ptrdiff_t>(in) - 1));
    taps.index.push_back(clamped);
    taps.weight.push_back(w);
    total += w;
  }
  for (double& w : taps.weight) w /= total;
  return taps;
}

// Applies `taps` along rows (horizontal) into an out_cols-wide image.
Image2D resample_rows(const Image2D& img, const std::vector<ResampleTaps>& taps) {
  Image2D out(img.height(), taps.size());
  const auto rows = static_cast<std::ptrdiff_t>(img.height());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const auto src = img.row(static_cast<std::size_t>(r));
    auto dst = out.row(static_cast<std::size_t>(r));
    for (std::size_t k = 0; k < taps.size(); ++k) {
      double acc = 0.0;
      for (std::size_t t = 0; t < taps[k].index.size(); ++t) acc += taps[k].weight[t] * src[taps[k].index[t]];
      dst[k] = acc;
    }
  }
  return out;
}

Image2D resample_cols(const Image2D& img, const std::vector<ResampleTaps>& taps) {
  Image2D out(taps.size(), img.width());
  const auto rows = static_cast<std::ptrdiff_t>(taps.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < rows; ++k) {
    const auto& tk = taps[static_cast<std::size_t>(k)];
    auto dst = out.row(static_cast<std::size_t>(k));
    for (std::size_t t = 0; t < tk.index.size(); ++t) {
      const auto src = img.row(tk.index[t]);
      const double w = tk.weight[t];
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

Image2D clamp_nonnegative(Image2D img) {
  for (double& v : img.samples()) v = std::max(v, 0.0);
  return img;
}

}  // namespace

ScaleFactor::ScaleFactor(int s) : s_(s) {
  if (s != 2 && s != 4 && s != 8 && s != 16)
    throw InvalidArgument("scale factor must be one of 2, 4, 8, 16; got " + std::to_string(s));
}

double bicubic_kernel(double x) {
  const double a = kKeysA;
  const double t = std::abs(x);
  if (t < 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

std::vector<ResampleTaps> downsample_taps(std::size_t in, int s, bool antialias) {
  const std::size_t out = in / static_cast<std::size_t>(s);
  const double stretch = antialias ? static_cast<double>(s) : 1.0;
  const double support = 2.0 * stretch;
  std::vector<ResampleTaps> taps(out);
  for (std::size_t k = 0; k < out; ++k) {
    const double center = (static_cast<double>(k) + 0.5) * s - 0.5;
    taps[k] = make_taps(center, stretch, static_cast<std::ptrdiff_t>(std::floor(center - support)),
                        static_cast<std::ptrdiff_t>(std::ceil(center + support)), in);
  }
  return taps;
}

std::vector<ResampleTaps> upsample_taps(std::size_t in, int s) {
  const std::size_t out = in * static_cast<std::size_t>(s);
  std::vector<ResampleTaps> taps(out);
  for (std::size_t k = 0; k < out; ++k) {
    const double center = (static_cast<double>(k) + 0.5) / s - 0.5;
    const auto base = static_cast<std::ptrdiff_t>(std::floor(center));
    taps[k] = make_taps(center, 1.0, base - 1, base + 2, in);
  }
  return taps;
}

Image2D bicubic_downsample(const Image2D& img, ScaleFactor s, bool antialias) {
  const auto f = static_cast<std::size_t>(s.value());
  if (img.height() % f != 0 || img.width() % f != 0)
    throw InvalidArgument("bicubic_downsample: " + shape_string(img) + " not divisible by " + std::to_string(f));
  const Image2D horizontal = resample_rows(img, downsample_taps(img.width(), s.value(), antialias));
  return resample_cols(horizontal, downsample_taps(img.height(), s.value(), antialias));
}

Image2D bicubic_upsample(const Image2D& img, ScaleFactor s) {
  const Image2D horizontal = resample_rows(img, upsample_taps(img.width(), s.value()));
  return resample_cols(horizontal, upsample_taps(img.height(), s.value()));
}

Image2D crop_to_multiple(const Image2D& img, ScaleFactor s) {
  const auto f = static_cast<std::size_t>(s.value());
  const std::size_t rows = img.height() / f * f;
  const std::size_t cols = img.width() / f * f;
  if (rows == 0 || cols == 0)
    throw InvalidArgument("crop_to_multiple: " + shape_string(img) + " smaller than scale " + std::to_string(f));
  if (rows == img.height() && cols == img.width()) return img;
  return img.crop(rows, cols);
}

Degraded degrade(const DepthMap& gt, ScaleFactor s, bool antialias) {
  Image2D lr = clamp_nonnegative(bicubic_downsample(gt.data(), s, antialias));
  Image2D up = clamp_nonnegative(bicubic_upsample(lr, s));
  return {DepthMap(std::move(lr), gt.unit_scale()), DepthMap(std::move(up), gt.unit_scale())};
}

}  // namespace gdsr
