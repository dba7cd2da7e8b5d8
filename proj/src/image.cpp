#include "gdsr/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gdsr {

Image2D::Image2D(std::size_t height, std::size_t width, double fill)
    : height_(height), width_(width), samples_(height * width, fill) {
  if (height == 0 || width == 0) throw InvalidArgument("Image2D: dimensions must be positive");
  if (!std::isfinite(fill)) throw InvalidArgument("Image2D: fill value is not finite");
}

Image2D::Image2D(std::size_t height, std::size_t width, std::vector<double> samples)
    : height_(height), width_(width), samples_(std::move(samples)) {
  if (height == 0 || width == 0) throw InvalidArgument("Image2D: dimensions must be positive");
  if (samples_.size() != height * width)
    throw DimensionError("Image2D: sample count does not match height*width");
  if (!all_finite()) throw InvalidArgument("Image2D: non-finite sample");
}

bool Image2D::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

Image2D Image2D::crop(std::size_t rows, std::size_t cols) const {
  if (rows == 0 || cols == 0 || rows > height_ || cols > width_)
    throw InvalidArgument("Image2D::crop: block outside image");
  Image2D out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    std::copy_n(samples_.begin() + static_cast<std::ptrdiff_t>(r * width_), cols,
                out.samples_.begin() + static_cast<std::ptrdiff_t>(r * cols));
  return out;
}

std::string shape_string(const Image2D& img) {
  std::ostringstream os;
  os << img.height() << "x" << img.width();
  return os.str();
}

void require_same_shape(const Image2D& a, const Image2D& b, const char* what) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(what) + ": dimension mismatch " + shape_string(a) + " vs " +
                         shape_string(b));
}

Image2D elementwise_combine(const Image2D& a, const Image2D& b, BinaryOp op) {
  require_same_shape(a, b, "elementwise_combine");
  Image2D out(a.height(), a.width());
  auto x = a.samples();
  auto y = b.samples();
  auto z = out.samples();
  switch (op) {
    case BinaryOp::add:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + y[i];
      break;
    case BinaryOp::sub:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] - y[i];
      break;
    case BinaryOp::mul:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] * y[i];
      break;
    case BinaryOp::div:
      for (std::size_t i = 0; i < z.size(); ++i) {
        if (y[i] == 0.0) throw InvalidArgument("elementwise_combine: division by zero sample");
        z[i] = x[i] / y[i];
      }
      break;
  }
  return out;
}

Image2D scale(const Image2D& img, double factor) {
  Image2D out = img;
  for (double& v : out.samples()) v *= factor;
  return out;
}

Image2D add_scalar(const Image2D& img, double offset) {
  Image2D out = img;
  for (double& v : out.samples()) v += offset;
  return out;
}

double max_abs(const Image2D& img) {
  double m = 0.0;
  for (double v : img.samples()) m = std::max(m, std::abs(v));
  return m;
}

double sum_squares(const Image2D& img) {
  double s = 0.0;
  for (double v : img.samples()) s += v * v;
  return s;
}

double mean(const Image2D& img) {
  double s = 0.0;
  for (double v : img.samples()) s += v;
  return s / static_cast<double>(img.size());
}

double max_abs_diff(const Image2D& a, const Image2D& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto x = a.samples();
  auto y = b.samples();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

MultiChannelImage::MultiChannelImage(std::vector<Image2D> channels) : channels_(std::move(channels)) {
  if (channels_.empty()) throw InvalidArgument("MultiChannelImage: at least one channel required");
  for (const auto& ch : channels_) require_same_shape(channels_.front(), ch, "MultiChannelImage");
}

RgbImage::RgbImage(Image2D red, Image2D green, Image2D blue)
    : red_(std::move(red)), green_(std::move(green)), blue_(std::move(blue)) {
  require_same_shape(red_, green_, "RgbImage");
  require_same_shape(red_, blue_, "RgbImage");
  for (const Image2D* plane : {&red_, &green_, &blue_})
    for (double v : plane->samples())
      if (v < 0.0 || v > 1.0) throw InvalidArgument("RgbImage: sample outside [0, 1]");
}

RgbImage RgbImage::crop(std::size_t rows, std::size_t cols) const {
  return RgbImage(red_.crop(rows, cols), green_.crop(rows, cols), blue_.crop(rows, cols));
}

DepthMap::DepthMap(Image2D data, double unit_scale) : data_(std::move(data)), unit_scale_(unit_scale) {
  if (!(unit_scale > 0.0) || !std::isfinite(unit_scale))
    throw InvalidArgument("DepthMap: unit_scale must be positive and finite");
  for (double v : data_.samples())
    if (v < 0.0) throw InvalidArgument("DepthMap: negative depth sample");
}

QuantizedImage quantize(const Image2D& img, std::uint32_t max_value, bool strict) {
  if (max_value != 255 && max_value != 65535)
    throw InvalidArgument("quantize: max_value must be 255 or 65535");
  QuantizedImage q{img.height(), img.width(), max_value, {}};
  q.samples.resize(img.size());
  const double top = static_cast<double>(max_value);
  auto src = img.samples();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = src[i];
    if (strict && (v < 0.0 || v > 1.0))
      throw InvalidArgument("quantize: sample " + std::to_string(v) + " outside [0, 1]");
    // std::round rounds half away from zero.
    const double r = std::clamp(std::round(v * top), 0.0, top);
    q.samples[i] = static_cast<std::uint16_t>(r);
  }
  return q;
}

Image2D dequantize(const QuantizedImage& q) {
  if (q.max_value == 0) throw InvalidArgument("dequantize: max_value must be positive");
  std::vector<double> samples(q.samples.size());
  const double top = static_cast<double>(q.max_value);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = q.samples[i] / top;
  return Image2D(q.height, q.width, std::move(samples));
}

}  // namespace gdsr
