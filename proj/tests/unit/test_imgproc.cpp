#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "farf/color.hpp"
#include "farf/degrade.hpp"
#include "farf/error.hpp"
#include "farf/image.hpp"
#include "farf/image_io.hpp"
#include "farf/patches.hpp"
#include "farf/psnr.hpp"
#include "farf/resize.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace farf {
namespace {

using testing::random_plane;

TEST(ImagePlane, StoresWidthTimesHeightValues) {
  ImagePlane p(7, 3, 0.25);
  EXPECT_EQ(p.size(), 21u);
  EXPECT_EQ(p.at(6, 2), 0.25);
  EXPECT_THROW(ImagePlane(2, 2, std::vector<double>(3)), InvalidArgument);
}

TEST(ImagePlane, CropToMultipleIsCentered) {
  ImagePlane p(11, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 11; ++x) p.at(x, y) = x + 100 * y;
  const ImagePlane c = crop_to_multiple(p, 3);
  ASSERT_EQ(c.width(), 9);
  ASSERT_EQ(c.height(), 6);
  EXPECT_EQ(c.at(0, 0), 1 + 100 * 1);
}

TEST(Color, BlackAndWhite) {
  const auto black = rgb_to_ycc(ColorImage::from_gray(ImagePlane(2, 2, 0.0)));
  EXPECT_EQ(black.luma.at(0, 0), 0.0);
  const auto white = rgb_to_ycc(ColorImage::from_gray(ImagePlane(2, 2, 1.0)));
  EXPECT_NEAR(white.luma.at(1, 1), 1.0, 1e-12);
  EXPECT_NEAR(white.cb.at(1, 1), 0.5, 1e-12);
  EXPECT_NEAR(white.cr.at(1, 1), 0.5, 1e-12);
}

TEST(Color, RoundTripWithinOneMillionth) {
  const ColorImage img(random_plane(13, 9, 1), random_plane(13, 9, 2), random_plane(13, 9, 3));
  const ColorImage back = ycc_to_rgb(rgb_to_ycc(img));
  double worst = 0.0;
  for (std::size_t i = 0; i < img.r.size(); ++i) {
    worst = std::max({worst, std::abs(back.r.data()[i] - img.r.data()[i]),
                      std::abs(back.g.data()[i] - img.g.data()[i]),
                      std::abs(back.b.data()[i] - img.b.data()[i])});
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Color, StudioLumaMapsEndpoints) {
  const ImagePlane s = to_studio_luma(ImagePlane(1, 2, std::vector<double>{0.0, 1.0}));
  EXPECT_NEAR(s.at(0, 0) * 255.0, 16.0, 1e-9);
  EXPECT_NEAR(s.at(0, 1) * 255.0, 235.0, 1e-9);
}

TEST(Resize, ConstantStaysConstant) {
  for (double f : {0.25, 1.0 / 3.0, 0.5, 2.0, 3.0, 1.7}) {
    const ImagePlane out = resize_bicubic(ImagePlane(12, 9, 0.37), f);
    for (double v : out.data()) ASSERT_EQ(v, 0.37) << "factor " << f;
  }
}

TEST(Resize, LinearRampStaysLinearInInterior) {
  const int w = 16, s = 3;
  ImagePlane ramp(w, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < w; ++x) ramp.at(x, y) = static_cast<double>(x) / w;
  const ImagePlane up = resize_bicubic(ramp, s);
  // Output pixel x sits at source coordinate (x + 0.5) / s - 0.5.
  for (int y = 0; y < up.height(); ++y) {
    for (int x = 3 * s; x < up.width() - 3 * s; ++x) {
      const double u = (x + 0.5) / s - 0.5;
      ASSERT_NEAR(up.at(x, y), u / w, 1e-6);
    }
  }
}

TEST(Resize, MatchesNonSeparableReference) {
  const ImagePlane img = random_plane(8, 8, 42);
  const ImagePlane up = resize_bicubic(img, 3.0);
  const ImagePlane up_ref = oracle::bicubic_reference(img, 3.0);
  const ImagePlane down = resize_bicubic(up, 1.0 / 3.0);
  const ImagePlane down_ref = oracle::bicubic_reference(up_ref, 1.0 / 3.0);
  ASSERT_TRUE(down.same_dims(img));
  for (std::size_t i = 0; i < up.size(); ++i) ASSERT_NEAR(up.data()[i], up_ref.data()[i], 1e-12);
  EXPECT_NEAR(psnr(down, img, 0), psnr(down_ref, img, 0), 1e-9);
}

TEST(Resize, ZeroSizedOutputThrows) {
  EXPECT_THROW(resize_bicubic(ImagePlane(2, 2), 0.1), InvalidArgument);
  EXPECT_THROW(resize_bicubic(ImagePlane(2, 2), -1.0), InvalidArgument);
}

TEST(Degrade, ConstantStaysConstant) {
  const ImagePlane hr(12, 12, 0.6);
  for (const auto& spec : {DegradeSpec::bicubic(3), DegradeSpec::gaussian(2, 1.0)}) {
    const ImagePlane lr = degrade(hr, spec);
    for (double v : lr.data()) ASSERT_EQ(v, 0.6);
  }
}

TEST(Degrade, IdentityKernelIsPureSubsampling) {
  const ImagePlane hr = random_plane(4, 4, 5);
  const ImagePlane lr = degrade(hr, DegradeSpec::with_kernel(2, {1.0}));
  ASSERT_EQ(lr.width(), 2);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) EXPECT_EQ(lr.at(x, y), hr.at(2 * x, 2 * y));
}

TEST(Degrade, GaussianMatchesDirectConvolution) {
  ImagePlane ramp(24, 18);
  for (int y = 0; y < 18; ++y)
    for (int x = 0; x < 24; ++x) ramp.at(x, y) = (x + 0.5 * y) / 40.0;
  const auto spec = DegradeSpec::gaussian(3, 0.6 * 3);
  const ImagePlane got = degrade(ramp, spec);
  const ImagePlane want = oracle::direct_blur_decimate(ramp, spec.taps, 3);
  for (std::size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got.data()[i], want.data()[i], 1e-9);
}

TEST(Degrade, RejectsBadSpecs) {
  EXPECT_THROW(degrade(ImagePlane(10, 10), DegradeSpec::bicubic(3)), InvalidArgument);
  EXPECT_THROW(degrade(ImagePlane(4, 4), DegradeSpec::gaussian(2, 2.0)), InvalidArgument);
  EXPECT_THROW(DegradeSpec::with_kernel(2, {0.5, 0.4, 0.2}).validate(), InvalidArgument);
  EXPECT_THROW(DegradeSpec::bicubic(5).validate(), InvalidArgument);
}

TEST(Patches, OriginExamples) {
  EXPECT_EQ(patch_origins(6, 6, 6, 3).size(), 1u);
  const auto o = patch_origins(9, 9, 6, 3);
  ASSERT_EQ(o.size(), 4u);
  EXPECT_EQ(o[0], (PatchOrigin{0, 0}));
  EXPECT_EQ(o[1], (PatchOrigin{3, 0}));
  EXPECT_EQ(o[2], (PatchOrigin{0, 3}));
  EXPECT_EQ(o[3], (PatchOrigin{3, 3}));
  // Tail adjusted inward: 10 wide, stride 3 -> {0, 3, 4}.
  EXPECT_EQ(patch_origins_1d(10, 6, 3), (std::vector<int>{0, 3, 4}));
}

TEST(Patches, CountMatchesOriginFormula) {
  for (int w = 6; w < 30; w += 5) {
    for (int stride = 1; stride <= 6; ++stride) {
      // Regular grid count plus one when it leaves a tail.
      auto count = [&](int len) { return (len - 6) / stride + 1 + ((len - 6) % stride != 0); };
      ASSERT_EQ(extract_patches(ImagePlane(w, w + 3), 6, stride).size(),
                static_cast<std::size_t>(count(w) * count(w + 3)));
    }
  }
}

TEST(Patches, AggregateOfExtractIsIdentity) {
  for (int seed = 0; seed < 20; ++seed) {
    const ImagePlane img = random_plane(7 + seed, 11 + seed % 5, seed);
    for (int stride : {1, 2, 3, 5}) {
      const auto patches = extract_patches(img, 5, stride);
      EXPECT_EQ(aggregate_patches(patches, 5, img.width(), img.height()), img);
    }
  }
}

TEST(Patches, OverlapAverages) {
  std::vector<Patch> patches = {{{0, 0}, std::vector<double>(4, 0.0)},
                                {{1, 0}, std::vector<double>(4, 1.0)}};
  const ImagePlane out = aggregate_patches(patches, 2, 3, 2);
  EXPECT_EQ(out.at(0, 0), 0.0);
  EXPECT_EQ(out.at(1, 0), 0.5);
  EXPECT_EQ(out.at(2, 1), 1.0);
}

TEST(Patches, RandomPatchSetMatchesSumCountOracle) {
  Rng rng(9);
  const int w = 12, h = 10, size = 4;
  std::vector<Patch> patches;
  std::vector<double> sum(w * h, 0.0), cnt(w * h, 0.0);
  for (const auto& o : patch_origins(w, h, size, 4)) {  // guaranteed cover
    patches.push_back({o, {}});
  }
  for (int i = 0; i < 30; ++i) {
    patches.push_back({{static_cast<int>(rng.below(w - size + 1)),
                        static_cast<int>(rng.below(h - size + 1))},
                       {}});
  }
  for (auto& p : patches) {
    p.values.resize(size * size);
    for (int k = 0; k < size * size; ++k) {
      p.values[k] = rng.uniform();
      const int x = p.origin.x + k % size, y = p.origin.y + k / size;
      sum[y * w + x] += p.values[k];
      cnt[y * w + x] += 1.0;
    }
  }
  const ImagePlane out = aggregate_patches(patches, size, w, h);
  for (int i = 0; i < w * h; ++i) ASSERT_NEAR(out.data()[i], sum[i] / cnt[i], 1e-12);
}

TEST(Patches, UncoveredPixelThrows) {
  std::vector<Patch> patches = {{{0, 0}, std::vector<double>(4, 0.0)}};
  EXPECT_THROW(aggregate_patches(patches, 2, 3, 2), InvalidArgument);
}

TEST(Psnr, IdenticalIsInfinite) {
  const ImagePlane a = random_plane(10, 10, 3);
  EXPECT_EQ(psnr(a, a, 2), kInfinitePsnr);
}

TEST(Psnr, PeakSizedErrorIsZeroDb) {
  EXPECT_DOUBLE_EQ(psnr(ImagePlane(8, 8, 0.0), ImagePlane(8, 8, 1.0), 0), 0.0);
}

TEST(Psnr, SymmetricAndChecked) {
  const ImagePlane a = random_plane(16, 12, 1), b = random_plane(16, 12, 2);
  EXPECT_EQ(psnr(a, b, 3), psnr(b, a, 3));
  EXPECT_THROW(psnr(a, random_plane(12, 16, 1), 0), InvalidArgument);
  EXPECT_THROW(psnr(a, b, 6), InvalidArgument);
}

TEST(ImageIo, PngAndPpmRoundTripAt8Bits) {
  testing::TempDir dir("io");
  const ColorImage img = testing::scene_color(17, 11, 4);
  for (const char* name : {"a.png", "a.ppm"}) {
    write_image(dir / name, img);
    const ColorImage back = read_image(dir / name);
    ASSERT_EQ(back.width(), 17);
    for (std::size_t i = 0; i < img.r.size(); ++i) {
      ASSERT_EQ(quantize8(back.g.data()[i]), quantize8(img.g.data()[i]));
    }
  }
  EXPECT_THROW(read_image(dir / "missing.png"), IoError);
}

TEST(ImageIo, ReadsBottomUp24BitBmp) {
  testing::TempDir dir("bmp");
  // 2x2 image, rows stored bottom-up and padded to 4 bytes, BGR order.
  const unsigned char bytes[] = {
      'B', 'M', 70, 0, 0, 0, 0, 0, 0, 0, 54, 0, 0, 0,          // file header
      40, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 1, 0, 24, 0,        // info header
      0, 0, 0, 0, 16, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
      0, 0, 255, 0, 255, 0, 0, 0,                              // bottom: red, green
      255, 0, 0, 255, 255, 255, 0, 0};                         // top: blue, white
  {
    std::ofstream out(dir / "t.bmp", std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes), sizeof bytes);
  }
  const ColorImage img = read_image(dir / "t.bmp");
  ASSERT_EQ(img.width(), 2);
  EXPECT_EQ(img.b.at(0, 0), 1.0);  // top-left blue
  EXPECT_EQ(img.r.at(0, 0), 0.0);
  EXPECT_EQ(img.g.at(1, 0), 1.0);  // top-right white
  EXPECT_EQ(img.r.at(0, 1), 1.0);  // bottom-left red
  EXPECT_EQ(img.g.at(1, 1), 1.0);  // bottom-right green
  EXPECT_EQ(img.r.at(1, 1), 0.0);
}

}  // namespace
}  // namespace farf
