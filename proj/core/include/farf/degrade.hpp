#pragma once

#include <vector>

#include "farf/image.hpp"

namespace farf {

enum class DegradeKind {
  bicubic,  ///< antialiased bicubic shrink by 1/s (blur and decimation in one)
  kernel,   ///< separable blur with explicit taps, then keep every s-th sample
};

/// Degradation model: HR -> blur -> decimate by `scale`.
struct DegradeSpec {
  int scale = 3;
  DegradeKind kind = DegradeKind::bicubic;
  std::vector<double> taps;  // odd length, centered; used when kind == kernel

  static DegradeSpec bicubic(int scale);
  static DegradeSpec gaussian(int scale, double sigma);
  static DegradeSpec with_kernel(int scale, std::vector<double> taps);

  /// Throws InvalidArgument unless scale is in {2,3,4} and taps sum to 1.
  void validate() const;
};

/// Normalized Gaussian taps, support 2*ceil(2*sigma)+1.
std::vector<double> gaussian_taps(double sigma);

/// Separable correlation with centered taps summing to one, edge-replicated
/// borders. Accumulates offsets from the center sample, so constants pass
/// through exactly.
ImagePlane convolve_separable(const ImagePlane& img, const std::vector<double>& taps);

/// Requires both dims divisible by spec.scale.
ImagePlane degrade(const ImagePlane& hr, const DegradeSpec& spec);

}  // namespace farf
