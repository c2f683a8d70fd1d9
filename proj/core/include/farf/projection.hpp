#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include <Eigen/Core>

#include "farf/features.hpp"

namespace farf {

enum class ProjectionKind { pca, lsh };

const char* to_string(ProjectionKind kind);
ProjectionKind projection_kind_from_string(std::string_view name);

/// Linear map compressed = matrix * (feature - mean).
struct ProjectionModel {
  ProjectionKind kind = ProjectionKind::pca;
  Eigen::MatrixXd matrix;  // d_out x d_in
  Eigen::VectorXd mean;    // d_in, zero for LSH
  std::uint64_t seed = 0;  // LSH only
  /// PCA: number of leading components backed by non-negligible variance.
  /// Rows beyond it span the (near-)null space of the sample covariance.
  int data_rank = 0;

  int d_in() const { return static_cast<int>(matrix.cols()); }
  int d_out() const { return static_cast<int>(matrix.rows()); }

  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& feature) const;
  /// Row-wise projection of an N x d_in sample matrix.
  RowMatrix project_rows(const Eigen::Ref<const RowMatrix>& samples) const;
};

/// Top-d_out principal axes of the sample covariance, descending eigenvalue
/// order, each row signed so its largest-magnitude entry is positive.
ProjectionModel fit_pca(const Eigen::Ref<const RowMatrix>& samples, int d_out);

/// Random-hyperplane LSH: i.i.d. standard normal rows scaled to unit length.
ProjectionModel fit_lsh(int d_in, int d_out, std::uint64_t seed);

}  // namespace farf
