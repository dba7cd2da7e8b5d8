#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "gdsr/image.hpp"

namespace gdsr::io {

/// Grayscale (P5, Pf) decodes to Image2D, color (P6) to RgbImage.
using LoadedImage = std::variant<Image2D, RgbImage>;

/// Decodes binary PGM (P5), binary PPM (P6) and grayscale PFM (Pf).
/// Netpbm samples are one byte for maxval <= 255, else two bytes big-endian,
/// and are divided by maxval. PFM rows are stored bottom-to-top, a negative
/// scale means little-endian floats, and values are taken verbatim.
/// Throws FormatError on malformed headers, truncated payloads or
/// unsupported maxval.
LoadedImage decode_image(std::string_view bytes);
LoadedImage load_image(const std::filesystem::path& path);

/// Grayscale load; a P6 file is reduced to its BT.601 luminance.
Image2D load_gray(const std::filesystem::path& path);
/// Color load; a grayscale file is replicated into three planes.
RgbImage load_rgb(const std::filesystem::path& path);
DepthMap load_depth(const std::filesystem::path& path, double unit_scale);

/// P5 with maxval 255 (bits = 8) or 65535 (bits = 16), quantized with
/// round-half-away-from-zero. With strict set, samples outside [0, 1] throw;
/// otherwise they are clamped.
std::string encode_pgm(const Image2D& img, int bits = 8, bool strict = true);
std::string encode_ppm(const RgbImage& img, int bits = 8);
/// Pf, little-endian (scale -1), rows bottom-to-top, float32 samples.
std::string encode_pfm(const Image2D& img);

enum class ImageFormat { pgm8, pgm16, pfm };

/// ".pgm" -> 8-bit PGM, ".pfm" -> PFM; anything else throws.
ImageFormat format_from_extension(const std::filesystem::path& path);

void save_image(const Image2D& img, const std::filesystem::path& path, ImageFormat format);
void save_rgb(const RgbImage& img, const std::filesystem::path& path, int bits = 8);

/// Error map clamp(|pred - gt| * unit_scale / max_err, 0, 1) as an 8-bit PGM.
std::string encode_error_map(const DepthMap& pred, const DepthMap& gt, double max_err);
void save_error_map(const DepthMap& pred, const DepthMap& gt, const std::filesystem::path& path, double max_err);

/// Writes bytes to path, throwing Error when the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace gdsr::io
