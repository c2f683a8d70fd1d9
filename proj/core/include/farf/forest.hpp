#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "farf/gwrr.hpp"
#include "farf/ridge.hpp"

namespace farf {

using FloatRowMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Co-located (compressed, original, target) triples, one row per patch.
/// `compressed` is column-major so per-dimension scans during split search
/// read contiguous memory.
struct TrainingSet {
  Eigen::MatrixXf compressed;  // n x d_compressed
  FloatRowMatrix original;     // n x d_original
  FloatRowMatrix target;       // n x d_hr (HR residual patches)

  std::size_t size() const { return static_cast<std::size_t>(target.rows()); }
};

struct ForestParams {
  int n_trees = 10;
  /// Root sits at depth 1; a node at depth max_depth is always a leaf.
  int max_depth = 15;
  int min_leaf = 64;
  int n_threshold_candidates = 16;
  /// Compressed dimensions tried per node; 0 picks round(sqrt(d_compressed)).
  int n_feature_candidates = 0;
  double bag_fraction = 0.8;
  /// Draw each tree's bag with replacement.
  bool bootstrap = true;
  std::uint64_t seed = 1;

  void validate() const;
  int feature_candidates(int d_compressed) const;
};

enum class LeafFeatures { original, compressed };

const char* to_string(LeafFeatures f);
LeafFeatures leaf_features_from_string(std::string_view name);

struct LeafParams {
  LeafFeatures features = LeafFeatures::original;
  /// GMM-weighted ridge; plain ridge with gwrr.lambda_base when false.
  bool use_gwrr = true;
  GwrrParams gwrr;
};

/// Routes left when compressed[feature] < threshold.
struct SplitNode {
  int feature = 0;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
};

struct LeafNode {
  LeafRegressor regressor;
  std::size_t n_samples = 0;
  Eigen::VectorXd mean_target;
};

using TreeNode = std::variant<SplitNode, LeafNode>;

/// Nodes stored in preorder: a split's left child immediately follows it.
struct Tree {
  std::vector<TreeNode> nodes;

  /// Index of the leaf reached by `compressed`.
  int route_index(const Eigen::Ref<const Eigen::VectorXd>& compressed) const;
  const LeafNode& route(const Eigen::Ref<const Eigen::VectorXd>& compressed) const;
  std::size_t leaf_count() const;
  int depth() const;
};

struct ForestModel {
  ForestParams params;
  LeafParams leaf;
  int compressed_dim = 0;
  int original_dim = 0;
  int target_dim = 0;
  std::vector<Tree> trees;

  /// First `n_trees` trees. Trees are trained independently from per-tree
  /// seeds, so this equals a forest trained with n_trees directly.
  ForestModel truncated(int n_trees) const;
};

/// Trace of the target covariance (sum of per-dimension population variances).
double variance_trace(const Eigen::Ref<const Eigen::MatrixXd>& targets);

/// Size-weighted mean of the children's variance traces; lower is better.
/// Returns +infinity when either side is empty.
double split_score(const Eigen::Ref<const Eigen::MatrixXd>& left_targets,
                   const Eigen::Ref<const Eigen::MatrixXd>& right_targets);

/// Sorted sample indices of tree `tree_index`'s bag.
std::vector<std::uint32_t> bag_indices(std::size_t n_samples, const ForestParams& params,
                                       std::size_t tree_index);

std::uint64_t tree_seed(const ForestParams& params, std::size_t tree_index);

Tree train_tree(const TrainingSet& data, std::span<const std::uint32_t> samples,
                const ForestParams& params, const LeafParams& leaf, std::uint64_t seed,
                std::string_view context = {});

ForestModel train_forest(const TrainingSet& data, const ForestParams& params,
                         const LeafParams& leaf);

/// Mean over trees of each routed leaf's prediction.
Eigen::VectorXd predict_residual(const ForestModel& model,
                                 const Eigen::Ref<const Eigen::VectorXd>& compressed,
                                 const Eigen::Ref<const Eigen::VectorXd>& original);

/// predict_residual + coarse_patch.
Eigen::VectorXd infer_patch(const ForestModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& compressed,
                            const Eigen::Ref<const Eigen::VectorXd>& original,
                            const Eigen::Ref<const Eigen::VectorXd>& coarse_patch);

}  // namespace farf
