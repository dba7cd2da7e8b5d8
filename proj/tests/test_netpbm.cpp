#include <bit>
#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "gdsr/error.hpp"
#include "gdsr/netpbm.hpp"
#include "oracles.hpp"

using namespace gdsr;
using namespace std::string_literals;

namespace {

std::string le_float(float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  return s;
}

std::string be_float(float f) {
  std::string s = le_float(f);
  return {s.rbegin(), s.rend()};
}

Image2D as_gray(const io::LoadedImage& img) { return std::get<Image2D>(img); }

}  // namespace

TEST_CASE("P5 8-bit decode") {
  const Image2D x = as_gray(io::decode_image("P5 2 2 255\n"s + "\x00\x80\xff\x40"s));
  CHECK(x == Image2D(2, 2, std::vector<double>{0, 128 / 255.0, 1, 64 / 255.0}));
}

TEST_CASE("P5 16-bit is big-endian") {
  const Image2D x = as_gray(io::decode_image("P5\n1 1\n65535\n"s + "\x01\x00"s));
  CHECK(x(0, 0) == 256 / 65535.0);
}

TEST_CASE("headers with comments") {
  const Image2D x = as_gray(io::decode_image("P5\n# a comment\n2 # w\n1\n# c\n255\n"s + "\x0a\x14"s));
  CHECK(x == Image2D(1, 2, std::vector<double>{10 / 255.0, 20 / 255.0}));
  // raster may start with whitespace-looking bytes
  const Image2D y = as_gray(io::decode_image("P5 2 1 255\n"s + "\x20\x0a"s));
  CHECK(y == Image2D(1, 2, std::vector<double>{32 / 255.0, 10 / 255.0}));
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(io::decode_image("P2 1 1 255\n0"), FormatError);
  CHECK_THROWS_AS(io::decode_image("P5 2 2 255\n\x01\x02"s), FormatError);
  CHECK_THROWS_AS(io::decode_image("P5 1 1 0\n\x01"s), FormatError);
  CHECK_THROWS_AS(io::decode_image("P5 1 1 65536\n\x01\x01"s), FormatError);
  CHECK_THROWS_AS(io::decode_image("P5 0 1 255\n"), FormatError);
  CHECK_THROWS_AS(io::decode_image("P5 1"), FormatError);
  CHECK_THROWS_AS(io::decode_image(""), FormatError);
  CHECK_THROWS_AS(io::decode_image("Pf\n1 1\n0\n"s + le_float(1.0f)), FormatError);
  CHECK_THROWS_AS(io::decode_image("Pf\n2 1\n-1.0\n"s + le_float(1.0f)), FormatError);
  // trailing data (a second image in the stream) is ignored
  CHECK(as_gray(io::decode_image("P5 1 1 255\n\x05\x06"s)) == Image2D(1, 1, 5 / 255.0));
}

TEST_CASE("P6 decode") {
  const auto img = io::decode_image("P6 1 1 255\n"s + "\xff\x00\x80"s);
  const RgbImage rgb = std::get<RgbImage>(img);
  CHECK(rgb.red()(0, 0) == 1.0);
  CHECK(rgb.green()(0, 0) == 0.0);
  CHECK(rgb.blue()(0, 0) == 128 / 255.0);
  const auto img16 = io::decode_image("P6 1 1 1000\n"s + "\x03\xe8\x00\x01\x01\xf4"s);
  const RgbImage c = std::get<RgbImage>(img16);
  CHECK(c.red()(0, 0) == 1.0);
  CHECK(c.green()(0, 0) == 1 / 1000.0);
  CHECK(c.blue()(0, 0) == 500 / 1000.0);
}

TEST_CASE("PFM endianness and row order") {
  const std::string le = "Pf\n2 2\n-1.0\n"s + le_float(3) + le_float(4) + le_float(1) + le_float(2);
  const Image2D a = as_gray(io::decode_image(le));
  CHECK(a == Image2D(2, 2, std::vector<double>{1, 2, 3, 4}));
  const std::string be = "Pf\n2 2\n1.0\n"s + be_float(3) + be_float(4) + be_float(1) + be_float(2.5f);
  const Image2D b = as_gray(io::decode_image(be));
  CHECK(b == Image2D(2, 2, std::vector<double>{1, 2.5, 3, 4}));
  CHECK(io::encode_pfm(a) == le);
}

TEST_CASE("PGM encode bytes") {
  const Image2D x(1, 3, std::vector<double>{0, 0.5, 1});
  CHECK(io::encode_pgm(x, 8) == "P5\n3 1\n255\n"s + "\x00\x80\xff"s);
  CHECK(io::encode_pgm(Image2D(1, 1, 256 / 65535.0), 16) == "P5\n1 1\n65535\n"s + "\x01\x00"s);
  CHECK_THROWS(io::encode_pgm(Image2D(1, 1, 1.5), 8));
  CHECK(io::encode_pgm(Image2D(1, 1, 1.5), 8, false) == "P5\n1 1\n255\n"s + "\xff"s);
  CHECK_THROWS(io::encode_pgm(x, 12));
}

TEST_CASE("save-load round trips are exact") {
  const auto dir = std::filesystem::temp_directory_path() / "gdsr_netpbm_test";
  std::filesystem::create_directories(dir);
  for (std::uint32_t maxv : {255u, 65535u}) {
    const Image2D q = dequantize(quantize(oracle::random_image(13, 7, maxv, 0.0, 1.0), maxv));
    const auto path = dir / "q.pgm";
    io::write_file(path, io::encode_pgm(q, maxv == 255 ? 8 : 16));
    CHECK(io::load_gray(path) == q);
  }
  const Image2D f = oracle::random_image(5, 9, 3, -100, 100);
  io::save_image(f, dir / "f.pfm", io::ImageFormat::pfm);
  const Image2D g = io::load_gray(dir / "f.pfm");
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g.samples()[i] == static_cast<double>(static_cast<float>(f.samples()[i])));
  const RgbImage rgb(dequantize(quantize(oracle::random_image(4, 6, 10, 0, 1), 255)),
                     dequantize(quantize(oracle::random_image(4, 6, 11, 0, 1), 255)),
                     dequantize(quantize(oracle::random_image(4, 6, 12, 0, 1), 255)));
  io::save_rgb(rgb, dir / "c.ppm");
  const RgbImage back = io::load_rgb(dir / "c.ppm");
  CHECK(back.red() == rgb.red());
  CHECK(back.green() == rgb.green());
  CHECK(back.blue() == rgb.blue());
  std::filesystem::remove_all(dir);
}

TEST_CASE("format from extension") {
  CHECK(io::format_from_extension("a.pgm") == io::ImageFormat::pgm8);
  CHECK(io::format_from_extension("a.pfm") == io::ImageFormat::pfm);
  CHECK_THROWS(io::format_from_extension("a.png"));
}

TEST_CASE("error maps") {
  Image2D g(4, 5);
  for (std::size_t i = 0; i < 20; ++i) g.samples()[i] = static_cast<double>(i % 7) * 0.25;
  const DepthMap gt(g);
  CHECK(io::encode_error_map(gt, gt, 1.0) == "P5\n5 4\n255\n" + std::string(20, '\0'));
  const DepthMap far(add_scalar(gt.data(), 2.0));
  CHECK(io::encode_error_map(far, gt, 1.5) == "P5\n5 4\n255\n" + std::string(20, '\xff'));
  const DepthMap half(add_scalar(gt.data(), 0.5));
  CHECK(io::encode_error_map(half, gt, 1.0) == "P5\n5 4\n255\n" + std::string(20, '\x80'));
  CHECK_THROWS_AS(io::encode_error_map(gt, DepthMap(Image2D(5, 4)), 1.0), DimensionError);
  CHECK_THROWS(io::save_error_map(gt, gt, "/nonexistent_dir/x.pgm", 1.0));
}

TEST_CASE("missing files") {
  CHECK_THROWS(io::load_image("/nonexistent/file.pgm"));
}
