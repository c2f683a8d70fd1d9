// farf: train, apply and evaluate feature-augmented random forest SR models.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "farf/config.hpp"
#include "farf/error.hpp"
#include "farf/evaluate.hpp"
#include "farf/image_io.hpp"
#include "farf/model_io.hpp"
#include "farf/pipeline.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

/// A pipeline stage failed; the message already names the stage.
struct StageFailure {
  std::string message;
};

/// A flag or config value was rejected.
struct UsageFailure {
  std::string message;
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const farf::Error& e) {
    throw StageFailure{std::string("stage '") + name + "' failed: " + e.what()};
  }
}

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw farf::IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Config flags shared by train and ablate: --preset, --config and one flag
// per SRConfig key.
class ConfigFlags {
 public:
  void attach(CLI::App* app, bool with_preset) {
    const farf::SRConfig defaults;
    if (with_preset) {
      app->add_option("--preset", preset_, "start from a named preset (RF, RF+, RF#, FARF, FARF*)")
          ->default_str(defaults.preset);
    }
    app->add_option("--config", config_path_, "key=value config file applied after the preset");
    const auto& fields = farf::config_fields();
    values_.resize(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (std::string(fields[i].key) == "preset") continue;
      app->add_option("--" + dashed(fields[i].key), values_[i], fields[i].help)
          ->default_str(defaults.get(fields[i].key))
          ->group("Config");
    }
  }

  /// Config for `preset_name` (or --preset) with the file and flags applied.
  farf::SRConfig build(const std::optional<std::string>& preset_name = std::nullopt) const {
    try {
      return build_unchecked(preset_name);
    } catch (const farf::InvalidArgument& e) {
      throw UsageFailure{e.what()};
    }
  }

  const std::optional<std::string>& preset() const { return preset_; }

 private:
  farf::SRConfig build_unchecked(const std::optional<std::string>& preset_name) const {
    farf::SRConfig cfg;
    if (preset_name) {
      cfg = farf::preset(*preset_name);
    } else if (preset_) {
      cfg = farf::preset(*preset_);
    }
    if (config_path_) {
      const farf::KeyValues kv = farf::parse_kv(read_text(*config_path_));
      for (const auto& [k, v] : kv) {
        if (k == "preset" && (preset_ || preset_name)) continue;
        if (k == "preset") cfg.set(k, v);
      }
      for (const auto& [k, v] : kv) {
        if (k != "preset") cfg.set(k, v);
      }
    }
    const auto& fields = farf::config_fields();
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (values_[i]) cfg.set(fields[i].key, *values_[i]);
    }
    cfg.validate();
    return cfg;
  }

  std::optional<std::string> preset_;
  std::optional<std::string> config_path_;
  std::vector<std::optional<std::string>> values_;
};

void print_stages(const farf::TrainReport& report) {
  for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& s : report.stages) {
    std::fprintf(stderr, "[time] %-20s %8.2f s\n", s.stage.c_str(), s.seconds);
  }
}

void print_leaf_histogram(const farf::ForestModel& forest) {
  std::map<int, std::size_t> buckets;  // floor(log2(n)) -> leaf count
  std::size_t leaves = 0;
  std::size_t deepest = 0;
  for (const auto& tree : forest.trees) {
    deepest = std::max<std::size_t>(deepest, static_cast<std::size_t>(tree.depth()));
    for (const auto& node : tree.nodes) {
      if (const auto* leaf = std::get_if<farf::LeafNode>(&node)) {
        int b = 0;
        while ((std::size_t{2} << b) <= leaf->n_samples) ++b;
        ++buckets[b];
        ++leaves;
      }
    }
  }
  std::fprintf(stderr, "[forest] %zu trees, %zu leaves, max depth %zu\n", forest.trees.size(),
               leaves, deepest);
  for (const auto& [b, count] : buckets) {
    std::fprintf(stderr, "[leaves] samples in [%zu, %zu): %zu\n", std::size_t{1} << b,
                 std::size_t{2} << b, count);
  }
}

int run_train(const std::string& hr_dir, const std::string& out_model, const ConfigFlags& flags) {
  const farf::SRConfig cfg = flags.build();
  farf::TrainReport report;
  farf::TrainedModel model;
  try {
    model = stage("train", [&] { return farf::train(hr_dir, cfg, &report); });
  } catch (...) {
    print_stages(report);
    throw;
  }
  const auto t0 = std::chrono::steady_clock::now();
  stage("save model", [&] { farf::save_model(out_model, model); });
  report.stages.push_back(
      {"save model", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  print_stages(report);
  std::fprintf(stderr, "[data] %zu images, %zu patches available, %zu samples used\n",
               report.images_used, report.patches_available, report.samples_used);
  print_leaf_histogram(model.forest);
  return 0;
}

int run_sr(const std::string& model_path, const std::string& in, const std::string& out,
           std::optional<int> scale) {
  const farf::TrainedModel model = stage("load model", [&] { return farf::load_model(model_path); });
  const farf::ColorImage lr = stage("read input", [&] { return farf::read_image(in); });
  const int s = scale.value_or(model.config.scale);
  const farf::ColorImage hr = stage("super-resolve", [&] { return farf::super_resolve(model, lr, s); });
  stage("write output", [&] { farf::write_image(out, hr); });
  return 0;
}

void print_averages(const farf::EvalReport& report) {
  for (const auto& m : report.methods()) {
    std::printf("%s,%s,%d,%.4f\n", farf::kAverageLabel, m.c_str(), report.scale, report.average(m));
  }
}

int run_eval(const std::optional<std::string>& model_path, const std::string& dataset,
             const std::string& report_path, bool baseline_only, int scale) {
  farf::EvalReport report;
  if (baseline_only) {
    report = stage("evaluate", [&] {
      return farf::evaluate_baseline(dataset, farf::DegradeSpec::bicubic(scale));
    });
  } else {
    const farf::TrainedModel model =
        stage("load model", [&] { return farf::load_model(*model_path); });
    report = stage("evaluate", [&] { return farf::evaluate(model, dataset); });
  }
  stage("write report", [&] { farf::write_report(report_path, report); });
  print_averages(report);
  return 0;
}

struct Grid {
  std::vector<std::string> presets;  // preset cells
  std::vector<int> trees;            // or a trees sweep on one preset
};

std::optional<Grid> parse_grid(const std::string& spec) {
  Grid g;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) parts.push_back(item);
    }
    return parts;
  };
  if (spec.rfind("trees=", 0) == 0) {
    for (const auto& t : split(spec.substr(6))) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(t, &used);
        if (used != t.size() || v < 1) return std::nullopt;
        g.trees.push_back(v);
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
    return g.trees.empty() ? std::nullopt : std::optional<Grid>(g);
  }
  const auto& names = farf::preset_names();
  for (const auto& p : split(spec)) {
    if (std::find(names.begin(), names.end(), p) == names.end()) return std::nullopt;
    g.presets.push_back(p);
  }
  return g.presets.empty() ? std::nullopt : std::optional<Grid>(g);
}

int run_ablate(const std::string& hr_dir, const std::string& dataset, const Grid& grid,
               const std::vector<std::uint64_t>& seeds, const std::string& report_path,
               const ConfigFlags& flags) {
  const farf::SRConfig probe =
      grid.presets.empty() ? flags.build() : flags.build(grid.presets.front());
  std::vector<std::string> warnings;
  const auto train_images =
      stage("load training images", [&] { return farf::load_luma_images(hr_dir, &warnings); });
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (train_images.empty()) {
    throw StageFailure{"stage 'load training images' failed: no readable images in " + hr_dir};
  }
  const auto eval_images =
      stage("load dataset", [&] { return farf::load_eval_set(dataset, probe.degrade_spec()); });

  farf::EvalReport report = farf::make_report(dataset, probe.degrade_spec());
  farf::add_bicubic_rows(report, eval_images);
  const bool tag_seed = seeds.size() > 1;
  int failures = 0;

  auto run_cell = [&](const std::string& label, const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
      std::fprintf(stderr, "[cell] %-24s %8.2f s\n", label.c_str(),
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    } catch (const farf::Error& e) {
      ++failures;
      std::fprintf(stderr, "[cell] %s failed: %s\n", label.c_str(), e.what());
      report.meta.emplace_back("failed." + label, e.what());
    }
  };

  for (const std::uint64_t seed : seeds) {
    const std::string suffix = tag_seed ? ":seed" + std::to_string(seed) : "";
    if (!grid.presets.empty()) {
      for (const auto& name : grid.presets) {
        const std::string label = name + suffix;
        run_cell(label, [&] {
          farf::SRConfig cfg = flags.build(name);
          cfg.seed = seed;
          const farf::TrainedModel model = farf::train(train_images, cfg);
          farf::add_model_rows(report, eval_images, model, label);
          report.meta.emplace_back("config." + label, cfg.get("preset"));
        });
      }
    } else {
      // One forest with the largest tree count; smaller forests are its prefixes.
      const std::string base = probe.preset;
      const int t_max = *std::max_element(grid.trees.begin(), grid.trees.end());
      std::optional<farf::TrainedModel> full;
      run_cell(base + ":T" + std::to_string(t_max) + suffix + " (train)", [&] {
        farf::SRConfig cfg = probe;
        cfg.seed = seed;
        cfg.forest.n_trees = t_max;
        full = farf::train(train_images, cfg);
      });
      if (!full) continue;
      for (const int t : grid.trees) {
        const std::string label = base + ":T" + std::to_string(t) + suffix;
        run_cell(label, [&] {
          farf::TrainedModel model = *full;
          model.forest = full->forest.truncated(t);
          model.config.forest.n_trees = t;
          farf::add_model_rows(report, eval_images, model, label);
        });
      }
    }
  }
  for (const auto& [k, v] : probe.to_kv()) {
    if (k != "seed" && k != "preset") report.meta.emplace_back("base." + k, v);
  }
  stage("write report", [&] { farf::write_report(report_path, report); });
  print_averages(report);
  return failures == 0 ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-augmented random forest super-resolution"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  ConfigFlags train_flags;
  std::string train_hr_dir, train_out;
  auto* train = app.add_subcommand("train", "train a model on a directory of HR images");
  train->add_option("--hr-dir", train_hr_dir, "directory of HR training images")
      ->required()
      ->check(CLI::ExistingDirectory);
  train->add_option("--out-model", train_out, "path of the model file to write")->required();
  train_flags.attach(train, true);

  std::string sr_model, sr_in, sr_out;
  std::optional<int> sr_scale;
  auto* sr = app.add_subcommand("sr", "super-resolve one image");
  sr->add_option("--model", sr_model, "trained model file")->required();
  sr->add_option("--in", sr_in, "input LR image (PNG, PPM, PGM, BMP)")->required();
  sr->add_option("--out", sr_out, "output image (.png, .ppm, .pgm)")->required();
  sr->add_option("--scale", sr_scale, "expected magnification; must match the model")
      ->default_str("model scale");

  std::optional<std::string> eval_model;
  std::string eval_dataset, eval_report;
  bool eval_baseline = false;
  int eval_scale = 3;
  auto* eval = app.add_subcommand("eval", "PSNR report for a model and the bicubic baseline");
  eval->add_option("--model", eval_model, "trained model file");
  eval->add_option("--dataset", eval_dataset, "directory of HR test images")->required();
  eval->add_option("--report", eval_report, "CSV report path (metadata goes to <path>.meta)")
      ->required();
  eval->add_flag("--baseline-only", eval_baseline, "score bicubic interpolation only");
  eval->add_option("--scale", eval_scale, "magnification for --baseline-only")
      ->capture_default_str()
      ->check(CLI::Range(2, 4));

  ConfigFlags ablate_flags;
  std::string ablate_hr_dir, ablate_dataset, ablate_grid = "RF,RF+,RF#,FARF", ablate_report;
  std::vector<std::uint64_t> ablate_seeds{1};
  auto* ablate = app.add_subcommand("ablate", "train and evaluate a grid of configurations");
  ablate->add_option("--hr-dir", ablate_hr_dir, "directory of HR training images")
      ->required()
      ->check(CLI::ExistingDirectory);
  ablate->add_option("--dataset", ablate_dataset, "directory of HR test images")->required();
  ablate->add_option("--grid", ablate_grid,
                     "comma-separated presets (RF,RF+,RF#,FARF,FARF*) or trees=1,5,10 for a "
                     "tree-count sweep of --preset")
      ->capture_default_str();
  ablate->add_option("--seeds", ablate_seeds, "master seeds; each cell is trained once per seed")
      ->delimiter(',')
      ->default_str("1");
  ablate->add_option("--report", ablate_report, "combined CSV report path")->required();
  ablate_flags.attach(ablate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train) return run_train(train_hr_dir, train_out, train_flags);
    if (*sr) return run_sr(sr_model, sr_in, sr_out, sr_scale);
    if (*eval) {
      if (!eval_baseline && !eval_model) {
        std::fprintf(stderr, "eval: --model is required unless --baseline-only is given\n%s",
                     eval->help().c_str());
        return kExitUsage;
      }
      return run_eval(eval_model, eval_dataset, eval_report, eval_baseline, eval_scale);
    }
    if (*ablate) {
      const auto grid = parse_grid(ablate_grid);
      if (!grid) {
        std::string valid;
        for (const auto& n : farf::preset_names()) valid += (valid.empty() ? "" : ", ") + n;
        std::fprintf(stderr,
                     "ablate: unknown grid '%s'; valid names: %s (or trees=N1,N2,...)\n",
                     ablate_grid.c_str(), valid.c_str());
        return kExitUsage;
      }
      return run_ablate(ablate_hr_dir, ablate_dataset, *grid, ablate_seeds, ablate_report,
                        ablate_flags);
    }
  } catch (const UsageFailure& f) {
    std::fprintf(stderr, "farf: invalid configuration: %s\n", f.message.c_str());
    return kExitUsage;
  } catch (const StageFailure& f) {
    std::fprintf(stderr, "farf: %s\n", f.message.c_str());
    return kExitFailure;
  } catch (const farf::Error& e) {
    std::fprintf(stderr, "farf: %s\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
