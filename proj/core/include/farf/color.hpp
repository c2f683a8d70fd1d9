#pragma once

#include "farf/image.hpp"

namespace farf {

struct YccPlanes {
  ImagePlane luma;
  ImagePlane cb;
  ImagePlane cr;
};

/// BT.601 full-range transform; chroma is offset so neutral gray maps to 0.5.
YccPlanes rgb_to_ycc(const ColorImage& img);
ColorImage ycc_to_rgb(const YccPlanes& ycc);

/// Maps full-range luma into the studio swing [16/255, 235/255], the range in
/// which benchmark PSNR figures for SR methods are conventionally reported.
ImagePlane to_studio_luma(const ImagePlane& luma);

}  // namespace farf
