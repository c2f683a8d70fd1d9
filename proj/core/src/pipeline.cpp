#include "farf/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "farf/color.hpp"
#include "farf/degrade.hpp"
#include "farf/error.hpp"
#include "farf/features.hpp"
#include "farf/ibp.hpp"
#include "farf/image_io.hpp"
#include "farf/parallel.hpp"
#include "farf/patches.hpp"
#include "farf/resize.hpp"
#include "farf/rng.hpp"

namespace farf {

namespace {

constexpr std::uint32_t kUnselected = std::numeric_limits<std::uint32_t>::max();
constexpr std::size_t kInferenceChunk = 4096;

class Stopwatch {
 public:
  explicit Stopwatch(TrainReport* report) : report_(report) {}

  void lap(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    if (report_ != nullptr) {
      report_->stages.push_back({stage, std::chrono::duration<double>(now - last_).count()});
    }
    last_ = now;
  }

 private:
  TrainReport* report_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

bool usable(const ImagePlane& hr, const SRConfig& cfg) {
  const int min_side = std::max(cfg.patch_size, 5);
  const int w = hr.width() - hr.width() % cfg.scale;
  const int h = hr.height() - hr.height() % cfg.scale;
  return w >= min_side && h >= min_side;
}

}  // namespace

ImagePlane coarse_estimate(const ImagePlane& lr, const SRConfig& cfg) {
  if (cfg.coarse == CoarseEstimator::ibp) return ibp_upscale(lr, cfg.degrade_spec(), cfg.ibp);
  return resize_bicubic(lr, static_cast<double>(cfg.scale));
}

std::vector<ImagePlane> load_luma_images(const std::filesystem::path& dir,
                                         std::vector<std::string>* warnings) {
  std::vector<ImagePlane> out;
  for (const auto& path : list_images(dir)) {
    try {
      out.push_back(rgb_to_ycc(read_image(path)).luma);
    } catch (const IoError& e) {
      if (warnings != nullptr) warnings->push_back("skipping " + path.string() + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::size_t> training_patch_counts(const std::vector<ImagePlane>& hr_lumas,
                                               const SRConfig& cfg) {
  std::vector<std::size_t> counts;
  counts.reserve(hr_lumas.size());
  for (const ImagePlane& hr : hr_lumas) {
    if (!usable(hr, cfg)) {
      counts.push_back(0);
      continue;
    }
    const int w = hr.width() - hr.width() % cfg.scale;
    const int h = hr.height() - hr.height() % cfg.scale;
    counts.push_back(patch_origins_1d(w, cfg.patch_size, cfg.train_stride).size() *
                     patch_origins_1d(h, cfg.patch_size, cfg.train_stride).size());
  }
  return counts;
}

TrainingData build_training_set(const std::vector<ImagePlane>& hr_lumas, const SRConfig& cfg) {
  cfg.validate();
  if (hr_lumas.empty()) throw InvalidArgument("build_training_set: no training images");
  const std::vector<std::size_t> counts = training_patch_counts(hr_lumas, cfg);
  std::vector<std::size_t> offsets(counts.size() + 1, 0);
  std::partial_sum(counts.begin(), counts.end(), offsets.begin() + 1);
  const std::size_t total = offsets.back();
  if (total == 0) throw InvalidArgument("build_training_set: zero usable patches");
  if (total >= kUnselected) throw InvalidArgument("build_training_set: too many patches");

  // Seeded shuffle of every patch position; the first m positions are kept
  // and slot_of maps a global patch index to its row in the shuffled set.
  const std::size_t m = std::min(total, cfg.max_train_samples);
  std::vector<std::uint32_t> slot_of(total, kUnselected);
  {
    std::vector<std::uint32_t> perm(total);
    std::iota(perm.begin(), perm.end(), 0u);
    Rng rng(cfg.shuffle_seed());
    for (std::size_t i = 0; i < m; ++i) std::swap(perm[i], perm[i + rng.below(total - i)]);
    for (std::size_t i = 0; i < m; ++i) slot_of[perm[i]] = static_cast<std::uint32_t>(i);
  }

  const FeatureConfig fcfg = cfg.feature_config();
  const int p = cfg.patch_size;
  const DegradeSpec spec = cfg.degrade_spec();
  TrainingData out;
  out.patches_available = total;
  out.set.original.resize(static_cast<Eigen::Index>(m), fcfg.dimension());
  out.set.target.resize(static_cast<Eigen::Index>(m), p * p);

  parallel_for(hr_lumas.size(), [&](std::size_t img) {
    if (counts[img] == 0) return;
    const ImagePlane hr = crop_to_multiple(hr_lumas[img], cfg.scale);
    const ImagePlane coarse = coarse_estimate(degrade(hr, spec), cfg);
    const FeatureMaps maps = feature_maps(coarse);
    const auto origins = patch_origins(hr.width(), hr.height(), p, cfg.train_stride);
    std::vector<double> feature(static_cast<std::size_t>(fcfg.dimension()));
    for (std::size_t k = 0; k < origins.size(); ++k) {
      const std::uint32_t slot = slot_of[offsets[img] + k];
      if (slot == kUnselected) continue;
      const PatchOrigin o = origins[k];
      assemble_feature(maps, o, fcfg, feature);
      auto orow = out.set.original.row(slot);
      for (int j = 0; j < fcfg.dimension(); ++j) orow[j] = static_cast<float>(feature[j]);
      auto trow = out.set.target.row(slot);
      for (int dy = 0; dy < p; ++dy) {
        for (int dx = 0; dx < p; ++dx) {
          trow[dy * p + dx] =
              static_cast<float>(hr.at(o.x + dx, o.y + dy) - coarse.at(o.x + dx, o.y + dy));
        }
      }
    }
  });

  if (cfg.projection == ProjectionKind::lsh) {
    out.projection = fit_lsh(fcfg.dimension(), cfg.projection_dim, cfg.lsh_seed());
  } else {
    const std::size_t n_fit = std::min<std::size_t>(m, cfg.projection_fit_samples);
    if (n_fit <= static_cast<std::size_t>(cfg.projection_dim)) {
      throw InvalidArgument("build_training_set: " + std::to_string(n_fit) +
                            " patches are too few to fit a " +
                            std::to_string(cfg.projection_dim) + "-dimensional PCA");
    }
    const RowMatrix fit_rows =
        out.set.original.topRows(static_cast<Eigen::Index>(n_fit)).cast<double>();
    out.projection = fit_pca(fit_rows, cfg.projection_dim);
  }

  out.set.compressed.resize(static_cast<Eigen::Index>(m), cfg.projection_dim);
  const std::size_t chunks = (m + kInferenceChunk - 1) / kInferenceChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const Eigen::Index begin = static_cast<Eigen::Index>(c * kInferenceChunk);
    const Eigen::Index rows = std::min<Eigen::Index>(kInferenceChunk, static_cast<Eigen::Index>(m) - begin);
    const RowMatrix block = out.set.original.middleRows(begin, rows).cast<double>();
    out.set.compressed.middleRows(begin, rows) =
        out.projection.project_rows(block).cast<float>();
  });
  return out;
}

TrainedModel train_on(const TrainingData& data, const SRConfig& cfg) {
  cfg.validate();
  TrainedModel model;
  model.config = cfg;
  model.projection = data.projection;
  model.forest = train_forest(data.set, cfg.forest_params(), cfg.leaf);
  return model;
}

TrainedModel train(const std::vector<ImagePlane>& hr_lumas, const SRConfig& cfg,
                   TrainReport* report) {
  Stopwatch clock(report);
  TrainingData data = build_training_set(hr_lumas, cfg);
  clock.lap("build training set");
  if (report != nullptr) {
    report->images_used = static_cast<std::size_t>(std::count_if(
        hr_lumas.begin(), hr_lumas.end(), [&](const ImagePlane& img) { return usable(img, cfg); }));
    report->patches_available = data.patches_available;
    report->samples_used = data.set.size();
  }
  TrainedModel model = train_on(data, cfg);
  clock.lap("train forest");
  return model;
}

TrainedModel train(const std::filesystem::path& hr_dir, const SRConfig& cfg,
                   TrainReport* report) {
  Stopwatch clock(report);
  std::vector<std::string> warnings;
  const std::vector<ImagePlane> images = load_luma_images(hr_dir, &warnings);
  if (report != nullptr) {
    report->warnings.insert(report->warnings.end(), warnings.begin(), warnings.end());
  }
  if (images.empty()) {
    throw IoError("no readable training images in '" + hr_dir.string() + "'");
  }
  clock.lap("load images");
  return train(images, cfg, report);
}

void check_model(const TrainedModel& model) {
  const SRConfig& cfg = model.config;
  const int d_in = cfg.feature_config().dimension();
  if (model.projection.d_in() != d_in || model.projection.d_out() != cfg.projection_dim) {
    throw InvalidArgument("model projection is " + std::to_string(model.projection.d_out()) +
                          "x" + std::to_string(model.projection.d_in()) + ", config expects " +
                          std::to_string(cfg.projection_dim) + "x" + std::to_string(d_in));
  }
  if (model.forest.trees.empty()) throw InvalidArgument("model has no trees");
  if (model.forest.target_dim != cfg.patch_size * cfg.patch_size ||
      model.forest.original_dim != d_in || model.forest.compressed_dim != cfg.projection_dim) {
    throw InvalidArgument("model forest dimensions disagree with its config");
  }
}

ImagePlane refine_coarse(const TrainedModel& model, const ImagePlane& coarse) {
  check_model(model);
  const SRConfig& cfg = model.config;
  const int p = cfg.patch_size;
  if (coarse.width() < std::max(p, 5) || coarse.height() < std::max(p, 5)) {
    throw InvalidArgument("image too small: upscaled size must be at least " +
                          std::to_string(std::max(p, 5)) + " pixels per side");
  }
  const FeatureConfig fcfg = cfg.feature_config();
  const FeatureMaps maps = feature_maps(coarse);
  const auto origins = patch_origins(coarse.width(), coarse.height(), p, cfg.infer_stride);
  const std::size_t patch_len = static_cast<std::size_t>(p) * p;

  PatchAccumulator acc(coarse.width(), coarse.height(), p);
  std::vector<double> predictions;
  for (std::size_t begin = 0; begin < origins.size(); begin += kInferenceChunk * 4) {
    const std::size_t end = std::min(origins.size(), begin + kInferenceChunk * 4);
    predictions.assign((end - begin) * patch_len, 0.0);
    const std::size_t n = end - begin;
    const std::size_t blocks = (n + 255) / 256;
    parallel_for(blocks, [&](std::size_t b) {
      Eigen::VectorXd feature(fcfg.dimension());
      Eigen::VectorXd coarse_patch(static_cast<Eigen::Index>(patch_len));
      for (std::size_t i = b * 256; i < std::min(n, (b + 1) * 256); ++i) {
        const PatchOrigin o = origins[begin + i];
        assemble_feature(maps, o, fcfg,
                         std::span<double>(feature.data(), static_cast<std::size_t>(feature.size())));
        for (int dy = 0; dy < p; ++dy) {
          for (int dx = 0; dx < p; ++dx) coarse_patch[dy * p + dx] = coarse.at(o.x + dx, o.y + dy);
        }
        const Eigen::VectorXd compressed = model.projection.project(feature);
        const Eigen::VectorXd hr = infer_patch(model.forest, compressed, feature, coarse_patch);
        std::copy(hr.data(), hr.data() + patch_len, predictions.begin() + i * patch_len);
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      acc.add(origins[begin + i],
              std::span<const double>(predictions.data() + i * patch_len, patch_len));
    }
  }
  return clamp01(acc.finish());
}

ImagePlane super_resolve_luma(const TrainedModel& model, const ImagePlane& lr_luma) {
  return refine_coarse(model, coarse_estimate(lr_luma, model.config));
}

ColorImage super_resolve(const TrainedModel& model, const ColorImage& lr, int scale) {
  if (scale != model.config.scale) {
    throw InvalidArgument("scale mismatch: model was trained for x" +
                          std::to_string(model.config.scale) + ", got x" + std::to_string(scale));
  }
  YccPlanes ycc = rgb_to_ycc(lr);
  YccPlanes out;
  out.luma = super_resolve_luma(model, ycc.luma);
  out.cb = resize_bicubic(ycc.cb, static_cast<double>(scale));
  out.cr = resize_bicubic(ycc.cr, static_cast<double>(scale));
  return clamp01(ycc_to_rgb(out));
}

}  // namespace farf
