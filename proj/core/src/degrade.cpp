#include "farf/degrade.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "farf/error.hpp"
#include "farf/resize.hpp"

namespace farf {

DegradeSpec DegradeSpec::bicubic(int scale) {
  DegradeSpec spec;
  spec.scale = scale;
  spec.kind = DegradeKind::bicubic;
  return spec;
}

DegradeSpec DegradeSpec::gaussian(int scale, double sigma) {
  return with_kernel(scale, gaussian_taps(sigma));
}

DegradeSpec DegradeSpec::with_kernel(int scale, std::vector<double> taps) {
  DegradeSpec spec;
  spec.scale = scale;
  spec.kind = DegradeKind::kernel;
  spec.taps = std::move(taps);
  return spec;
}

void DegradeSpec::validate() const {
  if (scale < 2 || scale > 4) {
    throw InvalidArgument("DegradeSpec: scale must be 2, 3 or 4 (got " +
                          std::to_string(scale) + ")");
  }
  if (kind == DegradeKind::kernel) {
    if (taps.empty() || taps.size() % 2 == 0) {
      throw InvalidArgument("DegradeSpec: kernel needs an odd number of taps");
    }
    const double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgument("DegradeSpec: kernel taps must sum to 1");
    }
  }
}

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian_taps: sigma must be positive");
  const int radius = static_cast<int>(std::ceil(2.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    taps[i + radius] = v;
    sum += v;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

ImagePlane convolve_separable(const ImagePlane& img, const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  ImagePlane tmp(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double c = img.at(x, y);
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * (img.at_clamped(x + k, y) - c);
      tmp.at(x, y) = c + acc;
    }
  }
  ImagePlane out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double c = tmp.at(x, y);
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * (tmp.at_clamped(x, y + k) - c);
      out.at(x, y) = c + acc;
    }
  }
  return out;
}

ImagePlane degrade(const ImagePlane& hr, const DegradeSpec& spec) {
  spec.validate();
  const int s = spec.scale;
  if (hr.width() % s != 0 || hr.height() % s != 0) {
    throw InvalidArgument("degrade: image " + std::to_string(hr.width()) + "x" +
                          std::to_string(hr.height()) + " not divisible by scale " +
                          std::to_string(s));
  }
  if (spec.kind == DegradeKind::bicubic) return resize_bicubic(hr, 1.0 / s);

  if (static_cast<int>(spec.taps.size()) > std::min(hr.width(), hr.height())) {
    throw InvalidArgument("degrade: kernel longer than image dimension");
  }
  const ImagePlane blurred = convolve_separable(hr, spec.taps);
  ImagePlane out(hr.width() / s, hr.height() / s);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out.at(x, y) = blurred.at(x * s, y * s);
  }
  return out;
}

}  // namespace farf
