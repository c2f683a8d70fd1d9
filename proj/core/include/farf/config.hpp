#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "farf/degrade.hpp"
#include "farf/features.hpp"
#include "farf/forest.hpp"
#include "farf/ibp.hpp"
#include "farf/kv.hpp"
#include "farf/projection.hpp"

namespace farf {

enum class CoarseEstimator { bicubic, ibp };

const char* to_string(CoarseEstimator c);
CoarseEstimator coarse_estimator_from_string(std::string_view name);

/// Every training and inference hyperparameter. Stored verbatim in model files.
struct SRConfig {
  std::string preset = "FARF";
  int scale = 3;
  /// Patch side on the upscaled grid, shared by features and HR targets.
  int patch_size = 6;
  int train_stride = 3;
  int infer_stride = 1;
  bool use_magnitudes = true;

  ProjectionKind projection = ProjectionKind::pca;
  int projection_dim = 30;
  int projection_fit_samples = 100000;

  /// forest.seed is ignored; forest_params() derives it from `seed`.
  ForestParams forest;
  LeafParams leaf;

  CoarseEstimator coarse = CoarseEstimator::bicubic;
  IbpParams ibp;

  DegradeKind degrade = DegradeKind::bicubic;
  /// Gaussian blur sigma in HR pixels when degrade == kernel.
  double degrade_sigma = 1.0;

  std::size_t max_train_samples = 500000;
  std::uint64_t seed = 1;

  void validate() const;

  FeatureConfig feature_config() const;
  DegradeSpec degrade_spec() const;
  ForestParams forest_params() const;
  std::uint64_t lsh_seed() const;
  std::uint64_t shuffle_seed() const;

  /// Canonical text form: every key, fixed order.
  KeyValues to_kv() const;
  std::string to_text() const { return format_kv(to_kv()); }

  /// Setting "preset" replaces the whole config with that preset.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  /// Applies `kv` in order, handling any "preset" entry first.
  void apply(const KeyValues& kv);
  static SRConfig from_text(std::string_view text);
};

struct ConfigField {
  const char* key;
  const char* help;
};

/// Keys in canonical order, with a one-line description each.
const std::vector<ConfigField>& config_fields();

/// RF, RF+, RF#, FARF, FARF*.
SRConfig preset(std::string_view name);
const std::vector<std::string>& preset_names();

}  // namespace farf
