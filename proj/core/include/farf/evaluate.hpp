#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "farf/degrade.hpp"
#include "farf/image.hpp"
#include "farf/kv.hpp"
#include "farf/model_io.hpp"

namespace farf {

/// One dataset image prepared for scoring: HR luma cropped to a multiple of
/// the scale, its degraded LR and the bicubic upscale of that LR.
struct EvalImage {
  std::string name;
  ImagePlane hr;
  ImagePlane lr;
  ImagePlane bicubic;
};

struct EvalRow {
  std::string image;
  std::string method;
  int scale = 0;
  double psnr_db = 0.0;
};

struct EvalReport {
  int scale = 0;
  int border_crop = 0;
  std::vector<EvalRow> rows;
  /// Written to the sidecar file next to the CSV.
  KeyValues meta;

  /// Methods in first-seen order.
  std::vector<std::string> methods() const;
  /// Mean PSNR of `method` over all images; throws if absent.
  double average(const std::string& method) const;
  double psnr(const std::string& image, const std::string& method) const;
};

/// Label of the average rows in the CSV.
inline constexpr const char* kAverageLabel = "average";

/// Reads every image in `dir` (sorted by filename). Throws InvalidArgument for
/// an empty dataset or a scale outside {2,3,4}, IoError for unreadable files.
std::vector<EvalImage> load_eval_set(const std::filesystem::path& dir, const DegradeSpec& spec);

/// PSNR between HR and estimated luma on the studio-swing scale, border_crop = s.
double luma_psnr(const ImagePlane& hr, const ImagePlane& estimate, int scale);

EvalReport make_report(const std::filesystem::path& dataset, const DegradeSpec& spec);
void add_bicubic_rows(EvalReport& report, const std::vector<EvalImage>& images);
void add_model_rows(EvalReport& report, const std::vector<EvalImage>& images,
                    const TrainedModel& model, const std::string& method);

/// Bicubic column plus the model's column (labelled with its preset).
EvalReport evaluate(const TrainedModel& model, const std::filesystem::path& dataset);
EvalReport evaluate_baseline(const std::filesystem::path& dataset, const DegradeSpec& spec);

/// CSV with header image,method,scale,psnr_db; per-image rows sorted by image
/// name, then one average row per method.
std::string report_csv(const EvalReport& report);

/// Writes the CSV to `path` and the metadata to `path` + ".meta".
void write_report(const std::filesystem::path& path, const EvalReport& report);

}  // namespace farf
