#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "farf/config.hpp"
#include "farf/forest.hpp"
#include "farf/image.hpp"
#include "farf/model_io.hpp"
#include "farf/projection.hpp"

namespace farf {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<StageTiming> stages;
  std::vector<std::string> warnings;
  std::size_t images_used = 0;
  /// Patch count over all images before capping.
  std::size_t patches_available = 0;
  std::size_t samples_used = 0;
};

struct TrainingData {
  TrainingSet set;
  ProjectionModel projection;
  std::size_t patches_available = 0;
};

/// Initial HR estimate of an LR image: bicubic or IBP per cfg.coarse.
ImagePlane coarse_estimate(const ImagePlane& lr, const SRConfig& cfg);

/// Full-range luma of every readable image in `dir`, sorted by filename.
/// Unreadable files are skipped and reported through `warnings`.
std::vector<ImagePlane> load_luma_images(const std::filesystem::path& dir,
                                         std::vector<std::string>* warnings = nullptr);

/// Training patch count per image after cropping to a multiple of the scale.
/// Images too small to hold a patch count zero.
std::vector<std::size_t> training_patch_counts(const std::vector<ImagePlane>& hr_lumas,
                                               const SRConfig& cfg);

/// Crops, degrades and coarse-upscales every image, then draws a seeded
/// shuffle of all patch positions and keeps the first cfg.max_train_samples.
/// Rows are in shuffled order. Targets are HR minus coarse patches. The
/// projection is fitted on the leading cfg.projection_fit_samples rows.
TrainingData build_training_set(const std::vector<ImagePlane>& hr_lumas, const SRConfig& cfg);

/// Fits the forest on prepared data.
TrainedModel train_on(const TrainingData& data, const SRConfig& cfg);

TrainedModel train(const std::vector<ImagePlane>& hr_lumas, const SRConfig& cfg,
                   TrainReport* report = nullptr);
TrainedModel train(const std::filesystem::path& hr_dir, const SRConfig& cfg,
                   TrainReport* report = nullptr);

/// Adds the forest's residual predictions to a coarse HR estimate, averaging
/// overlapping patches. Output is clamped to [0,1].
ImagePlane refine_coarse(const TrainedModel& model, const ImagePlane& coarse);

ImagePlane super_resolve_luma(const TrainedModel& model, const ImagePlane& lr_luma);

/// Luma through the forest, chroma bicubic. Throws InvalidArgument when
/// `scale` differs from the model's.
ColorImage super_resolve(const TrainedModel& model, const ColorImage& lr, int scale);

/// Throws InvalidArgument if the model's parts disagree with its config.
void check_model(const TrainedModel& model);

}  // namespace farf
