#pragma once

#include <limits>

#include "farf/image.hpp"

namespace farf {

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// PSNR in dB over 8-bit-quantized intensities (peak 255) after discarding
/// `border_crop` pixels on every side. Returns kInfinitePsnr when the
/// quantized images are identical.
double psnr(const ImagePlane& a, const ImagePlane& b, int border_crop);

/// Mean squared error in 8-bit units over the same cropped window.
double mse8(const ImagePlane& a, const ImagePlane& b, int border_crop);

}  // namespace farf
