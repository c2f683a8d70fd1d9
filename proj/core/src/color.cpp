#include "farf/color.hpp"

#include "farf/error.hpp"

namespace farf {
namespace {

constexpr double kR = 0.299;
constexpr double kG = 0.587;
constexpr double kB = 0.114;
constexpr double kCb = 2.0 * (1.0 - kB);  // 1.772
constexpr double kCr = 2.0 * (1.0 - kR);  // 1.402

}  // namespace

YccPlanes rgb_to_ycc(const ColorImage& img) {
  if (!img.r.same_dims(img.g) || !img.r.same_dims(img.b)) {
    throw InvalidArgument("rgb_to_ycc: channel dimensions differ");
  }
  const int w = img.width();
  const int h = img.height();
  YccPlanes out{ImagePlane(w, h), ImagePlane(w, h), ImagePlane(w, h)};
  const auto r = img.r.data();
  const auto g = img.g.data();
  const auto b = img.b.data();
  auto y = out.luma.data();
  auto cb = out.cb.data();
  auto cr = out.cr.data();
  for (std::size_t i = 0; i < r.size(); ++i) {
    y[i] = kR * r[i] + kG * g[i] + kB * b[i];
    cb[i] = 0.5 + (b[i] - y[i]) / kCb;
    cr[i] = 0.5 + (r[i] - y[i]) / kCr;
  }
  return out;
}

ColorImage ycc_to_rgb(const YccPlanes& ycc) {
  if (!ycc.luma.same_dims(ycc.cb) || !ycc.luma.same_dims(ycc.cr)) {
    throw InvalidArgument("ycc_to_rgb: plane dimensions differ");
  }
  const int w = ycc.luma.width();
  const int h = ycc.luma.height();
  ImagePlane r(w, h), g(w, h), b(w, h);
  const auto y = ycc.luma.data();
  const auto cb = ycc.cb.data();
  const auto cr = ycc.cr.data();
  auto rd = r.data();
  auto gd = g.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < y.size(); ++i) {
    rd[i] = y[i] + kCr * (cr[i] - 0.5);
    bd[i] = y[i] + kCb * (cb[i] - 0.5);
    gd[i] = (y[i] - kR * rd[i] - kB * bd[i]) / kG;
  }
  return {std::move(r), std::move(g), std::move(b)};
}

ImagePlane to_studio_luma(const ImagePlane& luma) {
  ImagePlane out = luma;
  for (double& v : out.data()) v = (16.0 + 219.0 * v) / 255.0;
  return out;
}

}  // namespace farf
