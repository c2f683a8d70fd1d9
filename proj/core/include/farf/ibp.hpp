#pragma once

#include <vector>

#include "farf/degrade.hpp"
#include "farf/image.hpp"

namespace farf {

struct IbpParams {
  int iterations = 20;
  /// Back-projection kernel; empty means Gaussian with sigma = sigma_per_scale * s.
  std::vector<double> kernel;
  double sigma_per_scale = 0.6;
  /// Relaxation factor in (0, 1].
  double step = 1.0;

  void validate() const;
  std::vector<double> kernel_for(int scale) const;
};

struct IbpTrace {
  ImagePlane image;
  /// ||lr - degrade(estimate)||_2 for the initial estimate and each accepted iteration.
  std::vector<double> residual_norms;
  /// True when an iteration was rejected because the residual grew.
  bool early_stopped = false;
};

/// Starts from the bicubic upscale and repeatedly adds the back-projected
/// LR-consistency error. An update that increases the residual norm is
/// discarded and iteration stops. Output is not clamped.
ImagePlane ibp_upscale(const ImagePlane& lr, const DegradeSpec& spec, const IbpParams& params);
IbpTrace ibp_upscale_traced(const ImagePlane& lr, const DegradeSpec& spec,
                            const IbpParams& params);

/// ||lr - degrade(hr)||_2 over all LR pixels.
double lr_residual_norm(const ImagePlane& lr, const ImagePlane& hr, const DegradeSpec& spec);

}  // namespace farf
