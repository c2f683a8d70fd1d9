#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace farf {

/// Single-channel raster of real intensities, row-major with a top-left origin.
/// Values are nominally in [0,1] but are not clamped; only final outputs are.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int width, int height, double fill = 0.0);
  ImagePlane(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  /// Edge-replicating access for out-of-range coordinates.
  double at_clamped(int x, int y) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_dims(const ImagePlane& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Three planes of identical dimensions, R, G, B in [0,1].
struct ColorImage {
  ImagePlane r;
  ImagePlane g;
  ImagePlane b;

  ColorImage() = default;
  ColorImage(ImagePlane red, ImagePlane green, ImagePlane blue);
  /// Gray image: the same plane in all three channels.
  static ColorImage from_gray(const ImagePlane& gray);

  int width() const { return r.width(); }
  int height() const { return r.height(); }

  friend bool operator==(const ColorImage&, const ColorImage&) = default;
};

ImagePlane clamp01(ImagePlane img);
ColorImage clamp01(ColorImage img);

ImagePlane crop(const ImagePlane& img, int x0, int y0, int width, int height);

/// Center-crop so both dimensions are multiples of `multiple`.
ImagePlane crop_to_multiple(const ImagePlane& img, int multiple);
ColorImage crop_to_multiple(const ColorImage& img, int multiple);

}  // namespace farf
