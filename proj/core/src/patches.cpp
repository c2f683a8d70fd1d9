#include "farf/patches.hpp"

#include <string>

#include "farf/error.hpp"

namespace farf {

std::vector<int> patch_origins_1d(int length, int size, int stride) {
  if (size < 1 || size > length) {
    throw InvalidArgument("patch size " + std::to_string(size) + " does not fit length " +
                          std::to_string(length));
  }
  if (stride < 1 || stride > size) throw InvalidArgument("patch stride must be in [1, size]");
  std::vector<int> origins;
  int o = 0;
  for (; o + size <= length; o += stride) origins.push_back(o);
  if (origins.back() + size < length) origins.push_back(length - size);
  return origins;
}

std::vector<PatchOrigin> patch_origins(int width, int height, int size, int stride) {
  const auto xs = patch_origins_1d(width, size, stride);
  const auto ys = patch_origins_1d(height, size, stride);
  std::vector<PatchOrigin> out;
  out.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) out.push_back({x, y});
  }
  return out;
}

std::vector<Patch> extract_patches(const ImagePlane& img, int size, int stride) {
  std::vector<Patch> patches;
  for (const PatchOrigin& o : patch_origins(img.width(), img.height(), size, stride)) {
    Patch p{o, std::vector<double>(static_cast<std::size_t>(size) * size)};
    for (int dy = 0; dy < size; ++dy) {
      for (int dx = 0; dx < size; ++dx) p.values[dy * size + dx] = img.at(o.x + dx, o.y + dy);
    }
    patches.push_back(std::move(p));
  }
  return patches;
}

PatchAccumulator::PatchAccumulator(int width, int height, int patch_size)
    : width_(width),
      height_(height),
      patch_size_(patch_size),
      mean_(static_cast<std::size_t>(width) * height, 0.0),
      count_(static_cast<std::size_t>(width) * height, 0) {}

void PatchAccumulator::add(PatchOrigin origin, std::span<const double> values) {
  if (values.size() != static_cast<std::size_t>(patch_size_) * patch_size_) {
    throw InvalidArgument("PatchAccumulator: patch has wrong length");
  }
  if (origin.x < 0 || origin.y < 0 || origin.x + patch_size_ > width_ ||
      origin.y + patch_size_ > height_) {
    throw InvalidArgument("PatchAccumulator: patch outside image");
  }
  for (int dy = 0; dy < patch_size_; ++dy) {
    const std::size_t row = static_cast<std::size_t>(origin.y + dy) * width_ + origin.x;
    for (int dx = 0; dx < patch_size_; ++dx) {
      const std::size_t i = row + dx;
      ++count_[i];
      mean_[i] += (values[dy * patch_size_ + dx] - mean_[i]) / static_cast<double>(count_[i]);
    }
  }
}

ImagePlane PatchAccumulator::finish() const {
  ImagePlane out(width_, height_);
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (count_[i] == 0) {
      throw InvalidArgument("aggregate: pixel (" + std::to_string(i % width_) + "," +
                            std::to_string(i / width_) + ") is not covered by any patch");
    }
    d[i] = mean_[i];
  }
  return out;
}

ImagePlane aggregate_patches(std::span<const Patch> patches, int size, int width, int height) {
  PatchAccumulator acc(width, height, size);
  for (const Patch& p : patches) acc.add(p.origin, p.values);
  return acc.finish();
}

}  // namespace farf
