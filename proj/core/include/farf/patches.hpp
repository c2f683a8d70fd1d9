#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "farf/image.hpp"

namespace farf {

struct PatchOrigin {
  int x = 0;
  int y = 0;
  friend bool operator==(const PatchOrigin&, const PatchOrigin&) = default;
};

/// 0, stride, 2*stride, ... plus a final origin at length - size when the
/// regular grid would leave the tail uncovered.
std::vector<int> patch_origins_1d(int length, int size, int stride);

/// Raster order (y outer, x inner).
std::vector<PatchOrigin> patch_origins(int width, int height, int size, int stride);

struct Patch {
  PatchOrigin origin;
  std::vector<double> values;  // size*size, row-major
};

std::vector<Patch> extract_patches(const ImagePlane& img, int size, int stride);

/// Running per-pixel sum/count used to reassemble overlapping patches.
class PatchAccumulator {
 public:
  PatchAccumulator(int width, int height, int patch_size);

  void add(PatchOrigin origin, std::span<const double> values);
  /// Per-pixel mean. Throws InvalidArgument if any pixel is uncovered.
  ImagePlane finish() const;

 private:
  int width_;
  int height_;
  int patch_size_;
  std::vector<double> mean_;  // running mean, exact when all contributions agree
  std::vector<std::size_t> count_;
};

ImagePlane aggregate_patches(std::span<const Patch> patches, int size, int width, int height);

}  // namespace farf
