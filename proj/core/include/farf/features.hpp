#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "farf/image.hpp"
#include "farf/patches.hpp"

namespace farf {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Feature channels in their fixed concatenation order.
enum class Channel { gx = 0, gy, gxx, gyy, mag1, mag2 };
inline constexpr int kChannelCount = 6;

struct FeatureConfig {
  int patch_size = 6;
  /// Off drops mag1/mag2 (the plain four-gradient recipe).
  bool use_magnitudes = true;

  int channel_count() const { return use_magnitudes ? 6 : 4; }
  int dimension() const { return channel_count() * patch_size * patch_size; }
};

struct GradientMaps {
  ImagePlane gx, gy, gxx, gyy;
};

struct MagnitudeMaps {
  ImagePlane mag1, mag2;
};

/// All six channel maps in Channel order.
using FeatureMaps = std::array<ImagePlane, kChannelCount>;

/// Correlation with [-1,0,1] and [1,0,-2,0,1] horizontally and vertically,
/// edge-replicated borders. Requires both dims >= 5.
GradientMaps gradient_maps(const ImagePlane& img);

/// mag1 = |(gx, gy)|, mag2 = |(gxx, gyy)| per pixel.
MagnitudeMaps magnitude_maps(const ImagePlane& gx, const ImagePlane& gy, const ImagePlane& gxx,
                             const ImagePlane& gyy);

FeatureMaps feature_maps(const ImagePlane& img);

/// One row per origin: each enabled channel's patch_size^2 window, row-major,
/// channels concatenated in Channel order.
RowMatrix assemble_features(const FeatureMaps& maps, std::span<const PatchOrigin> origins,
                            const FeatureConfig& cfg);

/// Writes the feature vector of one patch into `out` (length cfg.dimension()).
void assemble_feature(const FeatureMaps& maps, PatchOrigin origin, const FeatureConfig& cfg,
                      std::span<double> out);

}  // namespace farf
