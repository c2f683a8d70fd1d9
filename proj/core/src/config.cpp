#include "farf/config.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "farf/error.hpp"
#include "farf/rng.hpp"

namespace farf {

const char* to_string(CoarseEstimator c) { return c == CoarseEstimator::ibp ? "ibp" : "bicubic"; }

CoarseEstimator coarse_estimator_from_string(std::string_view name) {
  if (name == "bicubic") return CoarseEstimator::bicubic;
  if (name == "ibp") return CoarseEstimator::ibp;
  throw InvalidArgument("unknown coarse estimator '" + std::string(name) + "' (bicubic|ibp)");
}

namespace {

const char* degrade_name(DegradeKind k) { return k == DegradeKind::bicubic ? "bicubic" : "gaussian"; }

DegradeKind degrade_from_string(std::string_view name) {
  if (name == "bicubic") return DegradeKind::bicubic;
  if (name == "gaussian") return DegradeKind::kernel;
  throw InvalidArgument("unknown degradation '" + std::string(name) + "' (bicubic|gaussian)");
}

int to_int(std::string_view key, std::string_view value) {
  const auto v = parse_int(key, value);
  if (v < -(1LL << 31) || v >= (1LL << 31)) {
    throw InvalidArgument("config key '" + std::string(key) + "': value out of range");
  }
  return static_cast<int>(v);
}

struct Field {
  ConfigField info;
  std::function<std::string(const SRConfig&)> get;
  std::function<void(SRConfig&, std::string_view)> set;
};

#define FARF_INT_FIELD(key, member, help)                                    \
  Field {                                                                    \
    {key, help}, [](const SRConfig& c) { return std::to_string(c.member); }, \
        [](SRConfig& c, std::string_view v) { c.member = to_int(key, v); }   \
  }
#define FARF_DOUBLE_FIELD(key, member, help)                                     \
  Field {                                                                        \
    {key, help}, [](const SRConfig& c) { return format_double(c.member); },      \
        [](SRConfig& c, std::string_view v) { c.member = parse_double(key, v); } \
  }
#define FARF_BOOL_FIELD(key, member, help)                                          \
  Field {                                                                           \
    {key, help}, [](const SRConfig& c) { return std::string(c.member ? "true" : "false"); }, \
        [](SRConfig& c, std::string_view v) { c.member = parse_bool(key, v); }      \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{{"preset", "named preset the config started from (RF, RF+, RF#, FARF, FARF*)"},
            [](const SRConfig& c) { return c.preset; },
            [](SRConfig& c, std::string_view v) { c = preset(v); }},
      FARF_INT_FIELD("scale", scale, "magnification factor (2, 3 or 4)"),
      FARF_INT_FIELD("patch_size", patch_size, "patch side on the upscaled grid"),
      FARF_INT_FIELD("train_stride", train_stride, "patch stride when building training samples"),
      FARF_INT_FIELD("infer_stride", infer_stride, "patch stride at inference"),
      FARF_BOOL_FIELD("use_magnitudes", use_magnitudes, "append the two gradient magnitude channels"),
      Field{{"projection", "routing projection (pca|lsh)"},
            [](const SRConfig& c) { return std::string(to_string(c.projection)); },
            [](SRConfig& c, std::string_view v) { c.projection = projection_kind_from_string(v); }},
      FARF_INT_FIELD("projection_dim", projection_dim, "compressed feature dimension"),
      FARF_INT_FIELD("projection_fit_samples", projection_fit_samples,
                     "max samples used to fit PCA"),
      FARF_INT_FIELD("n_trees", forest.n_trees, "trees in the forest"),
      FARF_INT_FIELD("max_depth", forest.max_depth, "maximum tree depth (root is depth 1)"),
      FARF_INT_FIELD("min_leaf", forest.min_leaf, "minimum samples per leaf"),
      FARF_INT_FIELD("n_threshold_candidates", forest.n_threshold_candidates,
                     "random thresholds tried per feature per node"),
      FARF_INT_FIELD("n_feature_candidates", forest.n_feature_candidates,
                     "compressed dimensions tried per node (0 = sqrt of projection_dim)"),
      FARF_DOUBLE_FIELD("bag_fraction", forest.bag_fraction, "fraction of samples bagged per tree"),
      FARF_BOOL_FIELD("bootstrap", forest.bootstrap, "bag with replacement"),
      Field{{"leaf_features", "features the leaf regressors use (original|compressed)"},
            [](const SRConfig& c) { return std::string(to_string(c.leaf.features)); },
            [](SRConfig& c, std::string_view v) { c.leaf.features = leaf_features_from_string(v); }},
      FARF_BOOL_FIELD("use_gwrr", leaf.use_gwrr, "GMM-weighted ridge at leaves (plain ridge if false)"),
      FARF_DOUBLE_FIELD("lambda", leaf.gwrr.lambda_base, "ridge regularization"),
      FARF_INT_FIELD("gmm_k", leaf.gwrr.gmm_k, "mixture components per leaf"),
      FARF_DOUBLE_FIELD("gwrr_cap", leaf.gwrr.cap, "clamp ratio for per-sample ridge weights"),
      FARF_DOUBLE_FIELD("gwrr_eps", leaf.gwrr.eps, "offset in the inverse-distance affinity"),
      FARF_INT_FIELD("gmm_max_iters", leaf.gwrr.gmm_max_iters, "EM iteration cap"),
      Field{{"coarse", "coarse estimator (bicubic|ibp)"},
            [](const SRConfig& c) { return std::string(to_string(c.coarse)); },
            [](SRConfig& c, std::string_view v) { c.coarse = coarse_estimator_from_string(v); }},
      FARF_INT_FIELD("ibp_iterations", ibp.iterations, "back-projection iterations"),
      FARF_DOUBLE_FIELD("ibp_sigma_per_scale", ibp.sigma_per_scale,
                        "back-projection Gaussian sigma divided by the scale"),
      FARF_DOUBLE_FIELD("ibp_step", ibp.step, "back-projection relaxation factor"),
      Field{{"degrade", "HR to LR degradation (bicubic|gaussian)"},
            [](const SRConfig& c) { return std::string(degrade_name(c.degrade)); },
            [](SRConfig& c, std::string_view v) { c.degrade = degrade_from_string(v); }},
      FARF_DOUBLE_FIELD("degrade_sigma", degrade_sigma, "Gaussian degradation sigma (HR pixels)"),
      Field{{"max_train_samples", "cap on training samples after shuffling"},
            [](const SRConfig& c) { return std::to_string(c.max_train_samples); },
            [](SRConfig& c, std::string_view v) {
              c.max_train_samples = static_cast<std::size_t>(parse_uint("max_train_samples", v));
            }},
      Field{{"seed", "master seed"}, [](const SRConfig& c) { return std::to_string(c.seed); },
            [](SRConfig& c, std::string_view v) { c.seed = parse_uint("seed", v); }},
  };
  return table;
}

#undef FARF_INT_FIELD
#undef FARF_DOUBLE_FIELD
#undef FARF_BOOL_FIELD

const Field& find_field(std::string_view key) {
  for (const Field& f : fields()) {
    if (key == f.info.key) return f;
  }
  throw InvalidArgument("unknown config key '" + std::string(key) + "'");
}

}  // namespace

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> out = [] {
    std::vector<ConfigField> v;
    for (const Field& f : fields()) v.push_back(f.info);
    return v;
  }();
  return out;
}

void SRConfig::validate() const {
  if (scale < 2 || scale > 4) throw InvalidArgument("config: scale must be 2, 3 or 4");
  if (patch_size < 2) throw InvalidArgument("config: patch_size must be >= 2");
  if (train_stride < 1 || train_stride > patch_size || infer_stride < 1 ||
      infer_stride > patch_size) {
    throw InvalidArgument("config: strides must be in [1, patch_size]");
  }
  const int d_in = feature_config().dimension();
  if (projection_dim < 1 || projection_dim > d_in) {
    throw InvalidArgument("config: projection_dim must be in [1, " + std::to_string(d_in) + "]");
  }
  if (projection_fit_samples <= projection_dim) {
    throw InvalidArgument("config: projection_fit_samples must exceed projection_dim");
  }
  forest.validate();
  if (leaf.gwrr.lambda_base < 0.0) throw InvalidArgument("config: lambda must be >= 0");
  if (leaf.gwrr.gmm_k < 1) throw InvalidArgument("config: gmm_k must be >= 1");
  if (leaf.gwrr.cap < 1.0) throw InvalidArgument("config: gwrr_cap must be >= 1");
  if (!(leaf.gwrr.eps > 0.0)) throw InvalidArgument("config: gwrr_eps must be positive");
  if (leaf.gwrr.gmm_max_iters < 1) throw InvalidArgument("config: gmm_max_iters must be >= 1");
  ibp.validate();
  degrade_spec().validate();
  if (max_train_samples < 1) throw InvalidArgument("config: max_train_samples must be >= 1");
}

FeatureConfig SRConfig::feature_config() const {
  FeatureConfig f;
  f.patch_size = patch_size;
  f.use_magnitudes = use_magnitudes;
  return f;
}

DegradeSpec SRConfig::degrade_spec() const {
  return degrade == DegradeKind::bicubic ? DegradeSpec::bicubic(scale)
                                         : DegradeSpec::gaussian(scale, degrade_sigma);
}

ForestParams SRConfig::forest_params() const {
  ForestParams p = forest;
  p.seed = derive_seed(seed, 0xF0);
  return p;
}

std::uint64_t SRConfig::lsh_seed() const { return derive_seed(seed, 0x15); }
std::uint64_t SRConfig::shuffle_seed() const { return derive_seed(seed, 0x5F); }

KeyValues SRConfig::to_kv() const {
  KeyValues kv;
  for (const Field& f : fields()) kv.emplace_back(f.info.key, f.get(*this));
  return kv;
}

void SRConfig::set(std::string_view key, std::string_view value) {
  find_field(key).set(*this, value);
}

std::string SRConfig::get(std::string_view key) const { return find_field(key).get(*this); }

void SRConfig::apply(const KeyValues& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "preset") set(k, v);
  }
  for (const auto& [k, v] : kv) {
    if (k != "preset") set(k, v);
  }
}

SRConfig SRConfig::from_text(std::string_view text) {
  SRConfig c;
  c.apply(parse_kv(text));
  return c;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"RF", "RF+", "RF#", "FARF", "FARF*"};
  return names;
}

SRConfig preset(std::string_view name) {
  SRConfig c;
  c.preset = std::string(name);
  c.forest.n_trees = 10;
  c.forest.max_depth = 15;
  c.projection = ProjectionKind::pca;
  c.coarse = CoarseEstimator::bicubic;
  if (name == "RF" || name == "RF+" || name == "RF#") {
    c.use_magnitudes = name == "RF+";
    c.leaf.features = name == "RF#" ? LeafFeatures::original : LeafFeatures::compressed;
    c.leaf.use_gwrr = false;
  } else if (name == "FARF" || name == "FARF*") {
    c.use_magnitudes = true;
    c.leaf.features = LeafFeatures::original;
    c.leaf.use_gwrr = true;
    if (name == "FARF*") {
      c.projection = ProjectionKind::lsh;
      c.coarse = CoarseEstimator::ibp;
      c.forest.n_trees = 45;
    }
  } else {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
  }
  return c;
}

}  // namespace farf
