#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "farf/image.hpp"

namespace farf {

/// Reads PNG (8/16 bit, gray/RGB/palette, alpha dropped), binary PGM/PPM
/// (P5/P6, maxval <= 255) and uncompressed 24/32-bit BMP. Gray inputs are
/// replicated into all three channels. Throws IoError.
ColorImage read_image(const std::filesystem::path& path);

/// Writes PNG or PPM by extension; `.pgm` stores the luma of the image.
/// Values are clamped and quantized to 8 bits.
void write_image(const std::filesystem::path& path, const ColorImage& img);
void write_plane(const std::filesystem::path& path, const ImagePlane& plane);

bool is_supported_image(const std::filesystem::path& path);

/// Image files directly inside `dir`, sorted by filename.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

/// Round-to-nearest 8-bit code of a [0,1] intensity (clamped).
inline int quantize8(double v) {
  v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  return static_cast<int>(v * 255.0 + 0.5);
}

}  // namespace farf
