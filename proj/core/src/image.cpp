#include "farf/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "farf/error.hpp"

namespace farf {

ImagePlane::ImagePlane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InvalidArgument("ImagePlane: negative dimensions");
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

ImagePlane::ImagePlane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0) throw InvalidArgument("ImagePlane: negative dimensions");
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgument("ImagePlane: data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
}

double ImagePlane::at_clamped(int x, int y) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return at(x, y);
}

ColorImage::ColorImage(ImagePlane red, ImagePlane green, ImagePlane blue)
    : r(std::move(red)), g(std::move(green)), b(std::move(blue)) {
  if (!r.same_dims(g) || !r.same_dims(b)) {
    throw InvalidArgument("ColorImage: channel dimensions differ");
  }
}

ColorImage ColorImage::from_gray(const ImagePlane& gray) { return {gray, gray, gray}; }

ImagePlane clamp01(ImagePlane img) {
  for (double& v : img.data()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

ColorImage clamp01(ColorImage img) {
  return {clamp01(std::move(img.r)), clamp01(std::move(img.g)), clamp01(std::move(img.b))};
}

ImagePlane crop(const ImagePlane& img, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 0 || height < 0 || x0 + width > img.width() ||
      y0 + height > img.height()) {
    throw InvalidArgument("crop: window outside image");
  }
  ImagePlane out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
  }
  return out;
}

ImagePlane crop_to_multiple(const ImagePlane& img, int multiple) {
  if (multiple < 1) throw InvalidArgument("crop_to_multiple: multiple must be >= 1");
  const int w = img.width() - img.width() % multiple;
  const int h = img.height() - img.height() % multiple;
  if (w == img.width() && h == img.height()) return img;
  return crop(img, (img.width() - w) / 2, (img.height() - h) / 2, w, h);
}

ColorImage crop_to_multiple(const ColorImage& img, int multiple) {
  return {crop_to_multiple(img.r, multiple), crop_to_multiple(img.g, multiple),
          crop_to_multiple(img.b, multiple)};
}

}  // namespace farf
