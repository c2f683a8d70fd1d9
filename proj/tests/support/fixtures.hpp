#pragma once

// Synthetic images and temporary directories shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "farf/image.hpp"
#include "farf/image_io.hpp"
#include "farf/rng.hpp"

namespace farf::testing {

inline ImagePlane random_plane(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  ImagePlane p(w, h);
  for (double& v : p.data()) v = rng.uniform();
  return p;
}

/// Smooth shading, a few hard-edged discs and stripes, light noise. Has the
/// mix of flat regions and edges that super-resolution cares about.
inline ImagePlane scene_plane(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  ImagePlane p(w, h);
  const double gx = rng.uniform() - 0.5, gy = rng.uniform() - 0.5;
  struct Disc {
    double cx, cy, r, v;
  };
  Disc discs[4];
  for (auto& d : discs) {
    d = {rng.uniform() * w, rng.uniform() * h, (0.1 + 0.25 * rng.uniform()) * std::min(w, h),
         rng.uniform()};
  }
  const double freq = 0.2 + 0.6 * rng.uniform();
  const double angle = rng.uniform() * 3.14159;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 0.5 + 0.3 * (gx * x / w + gy * y / h);
      for (const auto& d : discs) {
        if ((x - d.cx) * (x - d.cx) + (y - d.cy) * (y - d.cy) < d.r * d.r) v = 0.5 * v + 0.5 * d.v;
      }
      if (x > w / 2 && y > h / 2) {
        v += 0.15 * std::sin(freq * (std::cos(angle) * x + std::sin(angle) * y));
      }
      v += 0.01 * (rng.uniform() - 0.5);
      p.at(x, y) = std::clamp(v, 0.0, 1.0);
    }
  }
  return p;
}

inline ColorImage scene_color(int w, int h, std::uint64_t seed) {
  const ImagePlane base = scene_plane(w, h, seed);
  ImagePlane g = base, b = base;
  const ImagePlane tint = scene_plane(w, h, seed + 1000);
  for (std::size_t i = 0; i < base.size(); ++i) {
    g.data()[i] = std::clamp(0.8 * base.data()[i] + 0.2 * tint.data()[i], 0.0, 1.0);
    b.data()[i] = std::clamp(0.6 * base.data()[i] + 0.4 * (1.0 - tint.data()[i]), 0.0, 1.0);
  }
  return {base, g, b};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("farf_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Writes `count` synthetic PNG scenes of size w x h into `dir`.
inline void write_scenes(const std::filesystem::path& dir, int count, int w, int h,
                         std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    write_image(dir / ("scene" + std::to_string(i) + ".png"), scene_color(w, h, seed + i));
  }
}

}  // namespace farf::testing
