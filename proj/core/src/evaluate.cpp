#include "farf/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "farf/color.hpp"
#include "farf/error.hpp"
#include "farf/image_io.hpp"
#include "farf/pipeline.hpp"
#include "farf/psnr.hpp"
#include "farf/resize.hpp"

namespace farf {

std::vector<std::string> EvalReport::methods() const {
  std::vector<std::string> out;
  for (const EvalRow& r : rows) {
    if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
  }
  return out;
}

double EvalReport::average(const std::string& method) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const EvalRow& r : rows) {
    if (r.method == method) {
      sum += r.psnr_db;
      ++n;
    }
  }
  if (n == 0) throw InvalidArgument("report has no rows for method '" + method + "'");
  return sum / static_cast<double>(n);
}

double EvalReport::psnr(const std::string& image, const std::string& method) const {
  for (const EvalRow& r : rows) {
    if (r.image == image && r.method == method) return r.psnr_db;
  }
  throw InvalidArgument("report has no row for " + image + " / " + method);
}

std::vector<EvalImage> load_eval_set(const std::filesystem::path& dir, const DegradeSpec& spec) {
  if (spec.scale == 1) {
    throw InvalidArgument("scale 1 would compare images against themselves; use 2, 3 or 4");
  }
  spec.validate();
  const auto paths = list_images(dir);
  if (paths.empty()) throw InvalidArgument("dataset '" + dir.string() + "' contains no images");
  std::vector<EvalImage> out;
  for (const auto& path : paths) {
    EvalImage e;
    e.name = path.stem().string();
    e.hr = crop_to_multiple(rgb_to_ycc(read_image(path)).luma, spec.scale);
    e.lr = degrade(e.hr, spec);
    e.bicubic = resize_bicubic(e.lr, static_cast<double>(spec.scale));
    out.push_back(std::move(e));
  }
  return out;
}

double luma_psnr(const ImagePlane& hr, const ImagePlane& estimate, int scale) {
  return psnr(to_studio_luma(hr), to_studio_luma(clamp01(estimate)), scale);
}

EvalReport make_report(const std::filesystem::path& dataset, const DegradeSpec& spec) {
  EvalReport r;
  r.scale = spec.scale;
  r.border_crop = spec.scale;
  r.meta = {{"dataset", dataset.string()},
            {"scale", std::to_string(spec.scale)},
            {"border_crop", std::to_string(spec.scale)},
            {"channel", "luma"},
            {"luma_range", "studio_16_235"},
            {"quantization", "8bit"},
            {"degrade", spec.kind == DegradeKind::bicubic ? "bicubic" : "gaussian"}};
  return r;
}

void add_bicubic_rows(EvalReport& report, const std::vector<EvalImage>& images) {
  for (const EvalImage& e : images) {
    report.rows.push_back({e.name, "bicubic", report.scale, luma_psnr(e.hr, e.bicubic, report.scale)});
  }
}

void add_model_rows(EvalReport& report, const std::vector<EvalImage>& images,
                    const TrainedModel& model, const std::string& method) {
  if (model.config.scale != report.scale) {
    throw InvalidArgument("scale mismatch: model was trained for x" +
                          std::to_string(model.config.scale) + ", evaluating x" +
                          std::to_string(report.scale));
  }
  for (const EvalImage& e : images) {
    const ImagePlane sr = model.config.coarse == CoarseEstimator::bicubic
                              ? refine_coarse(model, e.bicubic)
                              : super_resolve_luma(model, e.lr);
    report.rows.push_back({e.name, method, report.scale, luma_psnr(e.hr, sr, report.scale)});
  }
}

EvalReport evaluate(const TrainedModel& model, const std::filesystem::path& dataset) {
  const DegradeSpec spec = model.config.degrade_spec();
  const auto images = load_eval_set(dataset, spec);
  EvalReport report = make_report(dataset, spec);
  add_bicubic_rows(report, images);
  add_model_rows(report, images, model, model.config.preset);
  for (const auto& [k, v] : model.config.to_kv()) report.meta.emplace_back("config." + k, v);
  return report;
}

EvalReport evaluate_baseline(const std::filesystem::path& dataset, const DegradeSpec& spec) {
  const auto images = load_eval_set(dataset, spec);
  EvalReport report = make_report(dataset, spec);
  add_bicubic_rows(report, images);
  return report;
}

namespace {

std::string format_psnr(double db) {
  if (db == kInfinitePsnr) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", db);
  return buf;
}

}  // namespace

std::string report_csv(const EvalReport& report) {
  std::vector<EvalRow> rows = report.rows;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const EvalRow& a, const EvalRow& b) { return a.image < b.image; });
  std::string out = "image,method,scale,psnr_db\n";
  auto line = [&](const std::string& image, const std::string& method, double db) {
    out += image + "," + method + "," + std::to_string(report.scale) + "," + format_psnr(db) + "\n";
  };
  for (const EvalRow& r : rows) line(r.image, r.method, r.psnr_db);
  for (const std::string& m : report.methods()) line(kAverageLabel, m, report.average(m));
  return out;
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + p.string() + "'");
  };
  write(path, report_csv(report));
  std::filesystem::path meta = path;
  meta += ".meta";
  write(meta, format_kv(report.meta));
}

}  // namespace farf
