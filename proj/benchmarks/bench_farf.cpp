#include <benchmark/benchmark.h>

#include "farf/degrade.hpp"
#include "farf/features.hpp"
#include "farf/gwrr.hpp"
#include "farf/patches.hpp"
#include "farf/pipeline.hpp"
#include "farf/resize.hpp"
#include "farf/ridge.hpp"
#include "farf/rng.hpp"
#include "fixtures.hpp"

namespace farf {
namespace {

Eigen::MatrixXd normal_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = rng.normal();
  return M;
}

void BM_ResizeUp3(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const ImagePlane img = testing::scene_plane(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(resize_bicubic(img, 3.0));
  state.SetItemsProcessed(state.iterations() * 9 * n * n);
}
BENCHMARK(BM_ResizeUp3)->Arg(64)->Arg(256);

void BM_DegradeBicubic3(benchmark::State& state) {
  const ImagePlane img = testing::scene_plane(384, 384, 2);
  for (auto _ : state) benchmark::DoNotOptimize(degrade(img, DegradeSpec::bicubic(3)));
}
BENCHMARK(BM_DegradeBicubic3);

void BM_FeatureMaps(benchmark::State& state) {
  const ImagePlane img = testing::scene_plane(256, 256, 3);
  for (auto _ : state) benchmark::DoNotOptimize(feature_maps(img));
}
BENCHMARK(BM_FeatureMaps);

void BM_AssembleFeatures(benchmark::State& state) {
  const ImagePlane img = testing::scene_plane(192, 192, 4);
  const FeatureMaps maps = feature_maps(img);
  const auto origins = patch_origins(192, 192, 6, 1);
  FeatureConfig cfg;
  cfg.use_magnitudes = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(assemble_features(maps, origins, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(origins.size()));
}
BENCHMARK(BM_AssembleFeatures)->Arg(0)->Arg(1);

void BM_FitRidge(benchmark::State& state) {
  const auto m = state.range(0);
  const Eigen::MatrixXd Dl = normal_matrix(m, 216, 5), Dh = normal_matrix(m, 36, 6);
  for (auto _ : state) benchmark::DoNotOptimize(fit_ridge(Dl, Dh, 0.01));
}
BENCHMARK(BM_FitRidge)->Arg(64)->Arg(1024)->Arg(16384);

void BM_FitGwrr(benchmark::State& state) {
  const auto m = state.range(0);
  const Eigen::MatrixXd Dl = normal_matrix(m, 216, 7), Dh = normal_matrix(m, 36, 8);
  for (auto _ : state) benchmark::DoNotOptimize(fit_gwrr(Dl, Dh, GwrrParams{}, 9));
}
BENCHMARK(BM_FitGwrr)->Arg(64)->Arg(1024)->Arg(16384);

void BM_SuperResolve(benchmark::State& state) {
  std::vector<ImagePlane> scenes;
  for (int i = 0; i < 4; ++i) scenes.push_back(testing::scene_plane(96, 96, 10 + i));
  SRConfig cfg = preset("FARF");
  cfg.forest.n_trees = static_cast<int>(state.range(0));
  cfg.forest.max_depth = 8;
  const TrainedModel model = train(scenes, cfg);
  const ImagePlane lr = testing::scene_plane(64, 64, 20);
  for (auto _ : state) benchmark::DoNotOptimize(super_resolve_luma(model, lr));
  state.SetItemsProcessed(state.iterations() * 64 * 64 * 9);
}
BENCHMARK(BM_SuperResolve)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace farf

BENCHMARK_MAIN();
