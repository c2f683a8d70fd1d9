#include "farf/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "farf/error.hpp"
#include "farf/parallel.hpp"
#include "farf/rng.hpp"

namespace farf {

void ForestParams::validate() const {
  if (n_trees < 1) throw InvalidArgument("forest: n_trees must be >= 1");
  if (max_depth < 1 || max_depth > 60) throw InvalidArgument("forest: max_depth must be in [1, 60]");
  if (min_leaf < 1) throw InvalidArgument("forest: min_leaf must be >= 1");
  if (n_threshold_candidates < 1) throw InvalidArgument("forest: need >= 1 threshold candidate");
  if (n_feature_candidates < 0) throw InvalidArgument("forest: feature candidates must be >= 0");
  if (!(bag_fraction > 0.0 && bag_fraction <= 1.0)) {
    throw InvalidArgument("forest: bag_fraction must be in (0, 1]");
  }
}

int ForestParams::feature_candidates(int d_compressed) const {
  const int n = n_feature_candidates > 0
                    ? n_feature_candidates
                    : static_cast<int>(std::lround(std::sqrt(static_cast<double>(d_compressed))));
  return std::clamp(n, 1, d_compressed);
}

const char* to_string(LeafFeatures f) {
  return f == LeafFeatures::original ? "original" : "compressed";
}

LeafFeatures leaf_features_from_string(std::string_view name) {
  if (name == "original") return LeafFeatures::original;
  if (name == "compressed") return LeafFeatures::compressed;
  throw InvalidArgument("unknown leaf feature set '" + std::string(name) +
                        "' (original|compressed)");
}

int Tree::route_index(const Eigen::Ref<const Eigen::VectorXd>& compressed) const {
  int i = 0;
  while (const auto* split = std::get_if<SplitNode>(&nodes[i])) {
    i = compressed[split->feature] < split->threshold ? split->left : split->right;
  }
  return i;
}

const LeafNode& Tree::route(const Eigen::Ref<const Eigen::VectorXd>& compressed) const {
  return std::get<LeafNode>(nodes[route_index(compressed)]);
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) {
    return std::holds_alternative<LeafNode>(n);
  }));
}

int Tree::depth() const {
  // Preorder walk with an explicit stack of (node, depth).
  int deepest = 0;
  std::vector<std::pair<int, int>> stack{{0, 1}};
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (const auto* s = std::get_if<SplitNode>(&nodes[i])) {
      stack.emplace_back(s->left, d + 1);
      stack.emplace_back(s->right, d + 1);
    }
  }
  return deepest;
}

ForestModel ForestModel::truncated(int n_trees) const {
  if (n_trees < 1 || n_trees > static_cast<int>(trees.size())) {
    throw InvalidArgument("truncated: tree count out of range");
  }
  ForestModel out = *this;
  out.trees.resize(static_cast<std::size_t>(n_trees));
  out.params.n_trees = n_trees;
  return out;
}

double variance_trace(const Eigen::Ref<const Eigen::MatrixXd>& targets) {
  if (targets.rows() == 0) return 0.0;
  const Eigen::RowVectorXd mean = targets.colwise().mean();
  return (targets.rowwise() - mean).squaredNorm() / static_cast<double>(targets.rows());
}

double split_score(const Eigen::Ref<const Eigen::MatrixXd>& left,
                   const Eigen::Ref<const Eigen::MatrixXd>& right) {
  if (left.rows() == 0 || right.rows() == 0) return std::numeric_limits<double>::infinity();
  const double nl = static_cast<double>(left.rows());
  const double nr = static_cast<double>(right.rows());
  return (nl * variance_trace(left) + nr * variance_trace(right)) / (nl + nr);
}

std::uint64_t tree_seed(const ForestParams& params, std::size_t tree_index) {
  return derive_seed(params.seed, tree_index);
}

std::vector<std::uint32_t> bag_indices(std::size_t n, const ForestParams& params,
                                       std::size_t tree_index) {
  const std::size_t m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(params.bag_fraction * static_cast<double>(n))));
  Rng rng(derive_seed(tree_seed(params, tree_index), ~std::uint64_t{0}));
  std::vector<std::uint32_t> bag;
  if (params.bootstrap) {
    bag.resize(m);
    for (auto& b : bag) b = static_cast<std::uint32_t>(rng.below(n));
  } else {
    bag.resize(n);
    std::iota(bag.begin(), bag.end(), 0u);
    for (std::size_t i = 0; i < m; ++i) std::swap(bag[i], bag[i + rng.below(n - i)]);
    bag.resize(m);
  }
  std::sort(bag.begin(), bag.end());
  return bag;
}

namespace {

// Running target statistics: per-dimension sums plus the total sum of squares,
// enough for n * variance_trace = sumsq - |sum|^2 / n.
struct TargetStats {
  std::size_t count = 0;
  Eigen::VectorXd sum;
  double sumsq = 0.0;

  explicit TargetStats(Eigen::Index dims) : sum(Eigen::VectorXd::Zero(dims)) {}

  double scatter() const {
    return count == 0 ? 0.0 : sumsq - sum.squaredNorm() / static_cast<double>(count);
  }
};

class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, const ForestParams& params, const LeafParams& leaf,
              std::uint64_t seed, std::string_view context)
      : data_(data),
        params_(params),
        leaf_(leaf),
        seed_(seed),
        context_(context),
        d_compressed_(static_cast<int>(data.compressed.cols())),
        d_target_(data.target.cols()) {}

  Tree build(std::vector<std::uint32_t> samples) {
    build_node(std::move(samples), 1, 1);
    return std::move(tree_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = std::numeric_limits<double>::infinity();
  };

  TargetStats stats_of(const std::vector<std::uint32_t>& samples) const {
    TargetStats s(d_target_);
    for (std::uint32_t i : samples) {
      const auto row = data_.target.row(i).cast<double>();
      s.sum += row.transpose();
      s.sumsq += row.squaredNorm();
    }
    s.count = samples.size();
    return s;
  }

  Split best_split(const std::vector<std::uint32_t>& samples, std::uint64_t path,
                   const TargetStats& parent) {
    Rng rng(derive_seed(seed_, path));
    const int n_feat = params_.feature_candidates(d_compressed_);
    std::vector<int> dims(static_cast<std::size_t>(d_compressed_));
    std::iota(dims.begin(), dims.end(), 0);
    for (int i = 0; i < n_feat; ++i) {
      std::swap(dims[i], dims[i + rng.below(static_cast<std::uint64_t>(d_compressed_ - i))]);
    }

    const int n_thr = params_.n_threshold_candidates;
    const std::size_t n = samples.size();
    const double min_leaf = params_.min_leaf;
    std::vector<double> thresholds(n_thr);
    std::vector<TargetStats> bins(n_thr + 1, TargetStats(d_target_));
    std::vector<int> bin_of(n);
    Split best;

    for (int f = 0; f < n_feat; ++f) {
      const int dim = dims[f];
      const float* column = data_.compressed.col(dim).data();
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::uint32_t i : samples) {
        lo = std::min<double>(lo, column[i]);
        hi = std::max<double>(hi, column[i]);
      }
      // Thresholds are drawn even for constant dimensions to keep the
      // generator stream independent of the data.
      for (double& t : thresholds) t = lo + rng.uniform() * (hi - lo);
      if (!(hi > lo)) continue;
      std::sort(thresholds.begin(), thresholds.end());

      for (auto& b : bins) {
        b.count = 0;
        b.sum.setZero();
        b.sumsq = 0.0;
      }
      for (std::size_t k = 0; k < n; ++k) {
        const std::uint32_t i = samples[k];
        const double v = column[i];
        // Number of thresholds <= v; the sample goes left of threshold j iff bin <= j.
        const int bin = static_cast<int>(
            std::upper_bound(thresholds.begin(), thresholds.end(), v) - thresholds.begin());
        TargetStats& b = bins[bin];
        const auto row = data_.target.row(i).cast<double>();
        b.sum += row.transpose();
        b.sumsq += row.squaredNorm();
        ++b.count;
      }

      TargetStats left(d_target_);
      for (int j = 0; j < n_thr; ++j) {
        left.count += bins[j].count;
        left.sum += bins[j].sum;
        left.sumsq += bins[j].sumsq;
        const std::size_t n_right = parent.count - left.count;
        if (left.count < min_leaf || n_right < min_leaf) continue;
        if (j + 1 < n_thr && thresholds[j + 1] == thresholds[j]) continue;
        TargetStats right(d_target_);
        right.count = n_right;
        right.sum = parent.sum - left.sum;
        right.sumsq = parent.sumsq - left.sumsq;
        const double score = (left.scatter() + right.scatter()) / static_cast<double>(n);
        if (score < best.score) {
          best.feature = dim;
          best.threshold = thresholds[j];
          best.score = score;
        }
      }
    }
    return best;
  }

  int build_node(std::vector<std::uint32_t> samples, int depth, std::uint64_t path) {
    const TargetStats parent = stats_of(samples);
    const std::size_t n = samples.size();
    const bool can_split = depth < params_.max_depth && n >= 2 * static_cast<std::size_t>(params_.min_leaf);
    if (can_split) {
      const double parent_score = parent.scatter() / static_cast<double>(n);
      const Split split = best_split(samples, path, parent);
      const double required = parent_score - 1e-12 - 1e-9 * parent_score;
      if (split.feature >= 0 && split.score <= required) {
        std::vector<std::uint32_t> left, right;
        const float* column = data_.compressed.col(split.feature).data();
        for (std::uint32_t i : samples) {
          (static_cast<double>(column[i]) < split.threshold ? left : right).push_back(i);
        }
        samples.clear();
        samples.shrink_to_fit();
        const int index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back(SplitNode{split.feature, split.threshold, -1, -1});
        const int l = build_node(std::move(left), depth + 1, 2 * path);
        const int r = build_node(std::move(right), depth + 1, 2 * path + 1);
        auto& node = std::get<SplitNode>(tree_.nodes[index]);
        node.left = l;
        node.right = r;
        return index;
      }
    }
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back(make_leaf(samples, path));
    return index;
  }

  LeafNode make_leaf(const std::vector<std::uint32_t>& samples, std::uint64_t path) const {
    const bool use_original = leaf_.features == LeafFeatures::original;
    const Eigen::Index m = static_cast<Eigen::Index>(samples.size());
    const Eigen::Index d = use_original ? data_.original.cols() : data_.compressed.cols();
    Eigen::MatrixXd D_l(m, d);
    Eigen::MatrixXd D_h(m, d_target_);
    for (Eigen::Index k = 0; k < m; ++k) {
      const std::uint32_t i = samples[k];
      if (use_original) {
        D_l.row(k) = data_.original.row(i).cast<double>();
      } else {
        D_l.row(k) = data_.compressed.row(i).cast<double>();
      }
      D_h.row(k) = data_.target.row(i).cast<double>();
    }
    const std::string where =
        (context_.empty() ? std::string() : std::string(context_) + " ") + "leaf " +
        std::to_string(path);

    LeafNode leaf;
    leaf.n_samples = samples.size();
    leaf.mean_target = D_h.colwise().mean().transpose();
    if (leaf_.use_gwrr) {
      leaf.regressor = fit_gwrr(D_l, D_h, leaf_.gwrr, derive_seed(seed_, path ^ 0x5eedULL << 48), where);
    } else {
      leaf.regressor = fit_ridge(D_l, D_h, leaf_.gwrr.lambda_base, where);
    }
    return leaf;
  }

  const TrainingSet& data_;
  const ForestParams& params_;
  const LeafParams& leaf_;
  std::uint64_t seed_;
  std::string_view context_;
  int d_compressed_;
  Eigen::Index d_target_;
  Tree tree_;
};

}  // namespace

Tree train_tree(const TrainingSet& data, std::span<const std::uint32_t> samples,
                const ForestParams& params, const LeafParams& leaf, std::uint64_t seed,
                std::string_view context) {
  params.validate();
  if (samples.empty()) throw InvalidArgument("train_tree: no samples");
  if (data.compressed.rows() != data.target.rows() || data.original.rows() != data.target.rows()) {
    throw InvalidArgument("train_tree: training set matrices disagree on sample count");
  }
  TreeBuilder builder(data, params, leaf, seed, context);
  return builder.build(std::vector<std::uint32_t>(samples.begin(), samples.end()));
}

ForestModel train_forest(const TrainingSet& data, const ForestParams& params,
                         const LeafParams& leaf) {
  params.validate();
  if (data.size() == 0) throw InvalidArgument("train_forest: empty training set");
  ForestModel model;
  model.params = params;
  model.leaf = leaf;
  model.compressed_dim = static_cast<int>(data.compressed.cols());
  model.original_dim = static_cast<int>(data.original.cols());
  model.target_dim = static_cast<int>(data.target.cols());
  model.trees.resize(static_cast<std::size_t>(params.n_trees));
  parallel_for(model.trees.size(), [&](std::size_t t) {
    const auto bag = bag_indices(data.size(), params, t);
    model.trees[t] =
        train_tree(data, bag, params, leaf, tree_seed(params, t), "tree " + std::to_string(t));
  });
  return model;
}

Eigen::VectorXd predict_residual(const ForestModel& model,
                                 const Eigen::Ref<const Eigen::VectorXd>& compressed,
                                 const Eigen::Ref<const Eigen::VectorXd>& original) {
  const bool use_original = model.leaf.features == LeafFeatures::original;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(model.target_dim);
  for (const Tree& tree : model.trees) {
    const LeafNode& leaf = tree.route(compressed);
    sum += leaf.regressor.predict(use_original ? original : compressed);
  }
  return sum / static_cast<double>(model.trees.size());
}

Eigen::VectorXd infer_patch(const ForestModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& compressed,
                            const Eigen::Ref<const Eigen::VectorXd>& original,
                            const Eigen::Ref<const Eigen::VectorXd>& coarse_patch) {
  return predict_residual(model, compressed, original) + coarse_patch;
}

}  // namespace farf
