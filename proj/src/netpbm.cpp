#include "gdsr/netpbm.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gdsr/guidance.hpp"

namespace gdsr::io {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::string magic() {
    if (bytes_.size() < 2) throw FormatError("image header: file too short");
    pos_ = 2;
    return std::string(bytes_.substr(0, 2));
  }

  // Skips whitespace and '#' comments, then reads a decimal integer.
  std::uint64_t integer(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
      if (v > 0xFFFFFFFFull) throw FormatError(std::string("image header: ") + what + " too large");
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("image header: expected ") + what);
    return v;
  }

  // PFM scale line token: any printable non-space run.
  std::string token(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (pos_ == start) throw FormatError(std::string("image header: expected ") + what);
    return std::string(bytes_.substr(start, pos_ - start));
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      throw FormatError("image header: missing whitespace before raster");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::vector<double> read_netpbm_samples(std::string_view raster, std::size_t count, std::uint64_t maxval) {
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  if (raster.size() < count * bytes_per)
    throw FormatError("netpbm: truncated raster (" + std::to_string(raster.size()) + " of " +
                      std::to_string(count * bytes_per) + " bytes)");
  std::vector<double> out(count);
  const auto* p = reinterpret_cast<const unsigned char*>(raster.data());
  const double scale = static_cast<double>(maxval);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = bytes_per == 1 ? p[i] : (static_cast<std::uint32_t>(p[2 * i]) << 8) | p[2 * i + 1];
    if (v > maxval) throw FormatError("netpbm: sample exceeds maxval");
    out[i] = v / scale;
  }
  return out;
}

LoadedImage decode_pfm(HeaderReader& header, std::string_view bytes) {
  const auto width = header.integer("width");
  const auto height = header.integer("height");
  if (width == 0 || height == 0) throw FormatError("pfm: zero dimension");
  const std::string scale_token = header.token("scale");
  double scale = 0.0;
  try {
    std::size_t used = 0;
    scale = std::stod(scale_token, &used);
    if (used != scale_token.size()) throw FormatError("pfm: malformed scale '" + scale_token + "'");
  } catch (const std::logic_error&) {
    throw FormatError("pfm: malformed scale '" + scale_token + "'");
  }
  if (scale == 0.0 || !std::isfinite(scale)) throw FormatError("pfm: scale must be non-zero");
  const bool little = scale < 0.0;
  const std::size_t start = header.raster_start();
  const std::size_t count = width * height;
  if (bytes.size() < start + 4 * count) throw FormatError("pfm: truncated raster");
  std::vector<double> samples(count);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + start);
  for (std::size_t r = 0; r < height; ++r) {
    // File row 0 is the bottom image row.
    const std::size_t dst_row = height - 1 - r;
    for (std::size_t c = 0; c < width; ++c) {
      const unsigned char* q = p + 4 * (r * width + c);
      std::uint32_t bits = little ? (std::uint32_t{q[0]} | std::uint32_t{q[1]} << 8 | std::uint32_t{q[2]} << 16 |
                                     std::uint32_t{q[3]} << 24)
                                  : (std::uint32_t{q[3]} | std::uint32_t{q[2]} << 8 | std::uint32_t{q[1]} << 16 |
                                     std::uint32_t{q[0]} << 24);
      const float v = std::bit_cast<float>(bits);
      if (!std::isfinite(v)) throw FormatError("pfm: non-finite sample");
      samples[dst_row * width + c] = v;
    }
  }
  return Image2D(height, width, std::move(samples));
}

void put_sample(std::string& out, std::uint16_t v, bool wide) {
  if (wide) out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v & 0xFF));
}

std::uint32_t maxval_for_bits(int bits) {
  if (bits == 8) return 255;
  if (bits == 16) return 65535;
  throw InvalidArgument("netpbm: bit depth must be 8 or 16");
}

}  // namespace

LoadedImage decode_image(std::string_view bytes) {
  HeaderReader header(bytes);
  const std::string magic = header.magic();
  if (magic == "Pf") return decode_pfm(header, bytes);
  if (magic != "P5" && magic != "P6") throw FormatError("unsupported image type '" + magic + "'");
  const auto width = header.integer("width");
  const auto height = header.integer("height");
  const auto maxval = header.integer("maxval");
  if (width == 0 || height == 0) throw FormatError("netpbm: zero dimension");
  if (maxval == 0 || maxval > 65535) throw FormatError("netpbm: unsupported maxval " + std::to_string(maxval));
  const std::size_t start = header.raster_start();
  const std::size_t planes = magic == "P6" ? 3 : 1;
  const std::size_t pixels = width * height;
  auto samples = read_netpbm_samples(bytes.substr(start), pixels * planes, maxval);
  if (planes == 1) return Image2D(height, width, std::move(samples));
  std::vector<double> r(pixels), g(pixels), b(pixels);
  for (std::size_t i = 0; i < pixels; ++i) {
    r[i] = samples[3 * i];
    g[i] = samples[3 * i + 1];
    b[i] = samples[3 * i + 2];
  }
  return RgbImage(Image2D(height, width, std::move(r)), Image2D(height, width, std::move(g)),
                  Image2D(height, width, std::move(b)));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

LoadedImage load_image(const std::filesystem::path& path) {
  try {
    return decode_image(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Image2D load_gray(const std::filesystem::path& path) {
  auto img = load_image(path);
  if (auto* gray = std::get_if<Image2D>(&img)) return std::move(*gray);
  return luminance(std::get<RgbImage>(img));
}

RgbImage load_rgb(const std::filesystem::path& path) {
  auto img = load_image(path);
  if (auto* rgb = std::get_if<RgbImage>(&img)) return std::move(*rgb);
  const Image2D& gray = std::get<Image2D>(img);
  return RgbImage(gray, gray, gray);
}

DepthMap load_depth(const std::filesystem::path& path, double unit_scale) {
  return DepthMap(load_gray(path), unit_scale);
}

std::string encode_pgm(const Image2D& img, int bits, bool strict) {
  const QuantizedImage q = quantize(img, maxval_for_bits(bits), strict);
  std::string out = "P5\n" + std::to_string(q.width) + " " + std::to_string(q.height) + "\n" +
                    std::to_string(q.max_value) + "\n";
  out.reserve(out.size() + q.samples.size() * (bits / 8));
  for (std::uint16_t v : q.samples) put_sample(out, v, bits == 16);
  return out;
}

std::string encode_ppm(const RgbImage& img, int bits) {
  const std::uint32_t maxval = maxval_for_bits(bits);
  const QuantizedImage r = quantize(img.red(), maxval, true);
  const QuantizedImage g = quantize(img.green(), maxval, true);
  const QuantizedImage b = quantize(img.blue(), maxval, true);
  std::string out = "P6\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n" +
                    std::to_string(maxval) + "\n";
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    put_sample(out, r.samples[i], bits == 16);
    put_sample(out, g.samples[i], bits == 16);
    put_sample(out, b.samples[i], bits == 16);
  }
  return out;
}

std::string encode_pfm(const Image2D& img) {
  std::string out = "Pf\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n-1.0\n";
  out.reserve(out.size() + 4 * img.size());
  for (std::size_t r = img.height(); r-- > 0;) {
    for (double v : img.row(r)) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      for (int byte = 0; byte < 4; ++byte) out.push_back(static_cast<char>((bits >> (8 * byte)) & 0xFF));
    }
  }
  return out;
}

ImageFormat format_from_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".pfm") return ImageFormat::pfm;
  if (ext == ".pgm") return ImageFormat::pgm8;
  throw InvalidArgument("cannot infer image format from '" + path.string() + "' (use .pgm or .pfm)");
}

void save_image(const Image2D& img, const std::filesystem::path& path, ImageFormat format) {
  switch (format) {
    case ImageFormat::pgm8:
      write_file(path, encode_pgm(img, 8));
      break;
    case ImageFormat::pgm16:
      write_file(path, encode_pgm(img, 16));
      break;
    case ImageFormat::pfm:
      write_file(path, encode_pfm(img));
      break;
  }
}

void save_rgb(const RgbImage& img, const std::filesystem::path& path, int bits) {
  write_file(path, encode_ppm(img, bits));
}

std::string encode_error_map(const DepthMap& pred, const DepthMap& gt, double max_err) {
  require_same_shape(pred.data(), gt.data(), "error map");
  if (!(max_err > 0.0) || !std::isfinite(max_err)) throw InvalidArgument("error map: max_err must be positive");
  Image2D err(gt.height(), gt.width());
  auto p = pred.data().samples();
  auto g = gt.data().samples();
  auto e = err.samples();
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = std::clamp(std::abs(p[i] * pred.unit_scale() - g[i] * gt.unit_scale()) / max_err, 0.0, 1.0);
  return encode_pgm(err, 8);
}

void save_error_map(const DepthMap& pred, const DepthMap& gt, const std::filesystem::path& path, double max_err) {
  write_file(path, encode_error_map(pred, gt, max_err));
}

}  // namespace gdsr::io
