#include "farf/features.hpp"

#include <cmath>

#include "farf/error.hpp"

namespace farf {
namespace {

constexpr std::array<double, 3> kFirst = {-1.0, 0.0, 1.0};
constexpr std::array<double, 5> kSecond = {1.0, 0.0, -2.0, 0.0, 1.0};

template <std::size_t N>
ImagePlane correlate_x(const ImagePlane& img, const std::array<double, N>& k) {
  constexpr int r = static_cast<int>(N / 2);
  ImagePlane out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * img.at_clamped(x + i, y);
      out.at(x, y) = acc;
    }
  }
  return out;
}

template <std::size_t N>
ImagePlane correlate_y(const ImagePlane& img, const std::array<double, N>& k) {
  constexpr int r = static_cast<int>(N / 2);
  ImagePlane out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * img.at_clamped(x, y + i);
      out.at(x, y) = acc;
    }
  }
  return out;
}

ImagePlane hypot_map(const ImagePlane& a, const ImagePlane& b) {
  ImagePlane out(a.width(), a.height());
  const auto ad = a.data();
  const auto bd = b.data();
  auto od = out.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] = std::sqrt(ad[i] * ad[i] + bd[i] * bd[i]);
  return out;
}

}  // namespace

GradientMaps gradient_maps(const ImagePlane& img) {
  if (img.width() < 5 || img.height() < 5) {
    throw InvalidArgument("gradient_maps: image must be at least 5x5");
  }
  return {correlate_x(img, kFirst), correlate_y(img, kFirst), correlate_x(img, kSecond),
          correlate_y(img, kSecond)};
}

MagnitudeMaps magnitude_maps(const ImagePlane& gx, const ImagePlane& gy, const ImagePlane& gxx,
                             const ImagePlane& gyy) {
  if (!gx.same_dims(gy) || !gx.same_dims(gxx) || !gx.same_dims(gyy)) {
    throw InvalidArgument("magnitude_maps: gradient map dimensions differ");
  }
  return {hypot_map(gx, gy), hypot_map(gxx, gyy)};
}

FeatureMaps feature_maps(const ImagePlane& img) {
  GradientMaps g = gradient_maps(img);
  MagnitudeMaps m = magnitude_maps(g.gx, g.gy, g.gxx, g.gyy);
  return {std::move(g.gx), std::move(g.gy),   std::move(g.gxx),
          std::move(g.gyy), std::move(m.mag1), std::move(m.mag2)};
}

void assemble_feature(const FeatureMaps& maps, PatchOrigin origin, const FeatureConfig& cfg,
                      std::span<double> out) {
  const int p = cfg.patch_size;
  std::size_t k = 0;
  for (int c = 0; c < cfg.channel_count(); ++c) {
    const ImagePlane& map = maps[c];
    for (int dy = 0; dy < p; ++dy) {
      for (int dx = 0; dx < p; ++dx) out[k++] = map.at(origin.x + dx, origin.y + dy);
    }
  }
}

RowMatrix assemble_features(const FeatureMaps& maps, std::span<const PatchOrigin> origins,
                            const FeatureConfig& cfg) {
  const int p = cfg.patch_size;
  for (const PatchOrigin& o : origins) {
    if (o.x < 0 || o.y < 0 || o.x + p > maps[0].width() || o.y + p > maps[0].height()) {
      throw InvalidArgument("assemble_features: patch origin outside image");
    }
  }
  RowMatrix out(static_cast<Eigen::Index>(origins.size()), cfg.dimension());
  for (std::size_t i = 0; i < origins.size(); ++i) {
    assemble_feature(maps, origins[i], cfg,
                     std::span<double>(out.row(static_cast<Eigen::Index>(i)).data(),
                                       static_cast<std::size_t>(cfg.dimension())));
  }
  return out;
}

}  // namespace farf
