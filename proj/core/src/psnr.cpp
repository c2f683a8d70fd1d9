#include "farf/psnr.hpp"

#include <algorithm>
#include <cmath>

#include "farf/error.hpp"
#include "farf/image_io.hpp"

namespace farf {

double mse8(const ImagePlane& a, const ImagePlane& b, int border_crop) {
  if (!a.same_dims(b)) throw InvalidArgument("psnr: image dimensions differ");
  if (border_crop < 0 || 2 * border_crop >= std::min(a.width(), a.height())) {
    throw InvalidArgument("psnr: border_crop must be below half the smaller dimension");
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (int y = border_crop; y < a.height() - border_crop; ++y) {
    for (int x = border_crop; x < a.width() - border_crop; ++x) {
      const double d = quantize8(a.at(x, y)) - quantize8(b.at(x, y));
      sum += d * d;
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

double psnr(const ImagePlane& a, const ImagePlane& b, int border_crop) {
  const double mse = mse8(a, b, border_crop);
  if (mse == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace farf
