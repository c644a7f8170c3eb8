#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "resmatch/image.hpp"

namespace resmatch {

enum class ImageFormat { Png, Pgm };

/// Decodes PNG (8/16-bit grayscale or 8-bit RGB, converted to luminance
/// 0.299 R + 0.587 G + 0.114 B) or PGM (P2/P5). Intensities are scaled to
/// [0, 1]: 8-bit by 255, 16-bit by 65535. Decode errors name the byte offset;
/// unsupported layouts raise an explicit error.
GrayImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat format);

/// Format sniffed from the magic bytes.
GrayImage decode_image(std::span<const std::uint8_t> bytes);

/// 8-bit grayscale PNG.
std::vector<std::uint8_t> encode_png(const GrayImage& img);

/// 8-bit RGB PNG.
std::vector<std::uint8_t> encode_png(const RgbImage& img);

std::vector<std::uint8_t> read_bytes(const std::string& path);
void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes);
void write_text(const std::string& path, const std::string& text);

/// read_bytes + decode_image; errors carry the path.
GrayImage load_image(const std::string& path);

} // namespace resmatch
