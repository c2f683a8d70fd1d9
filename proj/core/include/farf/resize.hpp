#pragma once

#include "farf/image.hpp"

namespace farf {

/// Keys cubic convolution kernel with a = -0.5.
double cubic_kernel(double x);

/// Separable bicubic resampling. Output dims are round(dim * factor).
/// Source coordinates follow the pixel-center convention
/// u = x / factor + 0.5 * (1 - 1 / factor); borders clamp. When shrinking the
/// kernel is stretched by 1 / factor to antialias.
ImagePlane resize_bicubic(const ImagePlane& img, double factor);
ColorImage resize_bicubic(const ColorImage& img, double factor);

}  // namespace farf
