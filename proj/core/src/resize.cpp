#include "farf/resize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "farf/error.hpp"

namespace farf {

double cubic_kernel(double x) {
  const double a = std::abs(x);
  const double a2 = a * a;
  const double a3 = a2 * a;
  if (a <= 1.0) return 1.5 * a3 - 2.5 * a2 + 1.0;
  if (a <= 2.0) return -0.5 * a3 + 2.5 * a2 - 4.0 * a + 2.0;
  return 0.0;
}

namespace {

// Sparse resampling matrix for one axis: output i reads taps
// [first[i], first[i] + taps) with the given weights (indices clamped).
// Sums are taken relative to the heaviest tap (`anchor`); the weights sum to
// one, so this is the same interpolant but reproduces constants exactly.
struct AxisWeights {
  int taps = 0;
  std::vector<int> index;  // out_len * taps, already clamped
  std::vector<double> weight;
  std::vector<int> anchor;  // out_len
};

template <class Sample>
double interpolate(const AxisWeights& aw, int i, Sample sample) {
  const std::size_t base = static_cast<std::size_t>(i) * aw.taps;
  const double ref = sample(aw.anchor[i]);
  double acc = 0.0;
  for (int k = 0; k < aw.taps; ++k) acc += aw.weight[base + k] * (sample(aw.index[base + k]) - ref);
  return ref + acc;
}

AxisWeights axis_weights(int in_len, int out_len, double factor) {
  const bool shrink = factor < 1.0;
  const double kernel_scale = shrink ? factor : 1.0;
  const double kernel_width = 4.0 / kernel_scale;

  AxisWeights aw;
  aw.taps = static_cast<int>(std::ceil(kernel_width)) + 2;
  aw.index.resize(static_cast<std::size_t>(out_len) * aw.taps);
  aw.weight.resize(aw.index.size());
  aw.anchor.resize(out_len);

  for (int i = 0; i < out_len; ++i) {
    const double u = (i + 0.5) / factor - 0.5;
    const int left = static_cast<int>(std::floor(u - kernel_width / 2.0));
    double total = 0.0;
    for (int k = 0; k < aw.taps; ++k) {
      const int j = left + k;
      const double w = kernel_scale * cubic_kernel(kernel_scale * (u - j));
      const std::size_t slot = static_cast<std::size_t>(i) * aw.taps + k;
      aw.index[slot] = std::clamp(j, 0, in_len - 1);
      aw.weight[slot] = w;
      total += w;
    }
    int best = 0;
    for (int k = 0; k < aw.taps; ++k) {
      const std::size_t slot = static_cast<std::size_t>(i) * aw.taps + k;
      aw.weight[slot] /= total;
      if (aw.weight[slot] > aw.weight[static_cast<std::size_t>(i) * aw.taps + best]) best = k;
    }
    aw.anchor[i] = aw.index[static_cast<std::size_t>(i) * aw.taps + best];
  }
  return aw;
}

}  // namespace

ImagePlane resize_bicubic(const ImagePlane& img, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InvalidArgument("resize_bicubic: factor must be positive");
  }
  const int out_w = static_cast<int>(std::lround(img.width() * factor));
  const int out_h = static_cast<int>(std::lround(img.height() * factor));
  if (out_w < 1 || out_h < 1) {
    throw InvalidArgument("resize_bicubic: output would be empty");
  }

  const AxisWeights wx = axis_weights(img.width(), out_w, factor);
  const AxisWeights wy = axis_weights(img.height(), out_h, factor);

  // Vertical pass first, then horizontal.
  ImagePlane tmp(img.width(), out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < img.width(); ++x) {
      tmp.at(x, y) = interpolate(wy, y, [&](int j) { return img.at(x, j); });
    }
  }

  ImagePlane out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      out.at(x, y) = interpolate(wx, x, [&](int j) { return tmp.at(j, y); });
    }
  }
  return out;
}

ColorImage resize_bicubic(const ColorImage& img, double factor) {
  return {resize_bicubic(img.r, factor), resize_bicubic(img.g, factor),
          resize_bicubic(img.b, factor)};
}

}  // namespace farf
