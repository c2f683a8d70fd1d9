#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Core>

namespace farf {

/// Linear map from a leaf feature vector to an HR (residual) patch.
struct LeafRegressor {
  Eigen::MatrixXd P;  // d_hr x d_feature
  std::size_t n_samples = 0;
  double lambda_used = 0.0;
  bool weighted = false;

  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::VectorXd>& feature) const;
};

/// Ridge projection P = D_h^T D_l (D_l^T D_l + lambda I)^-1, so that a
/// prediction is P * feature. Rows of D_l / D_h are samples. Solved with a
/// Cholesky factorization, in the sample-space (dual) form when there are
/// fewer samples than feature dimensions.
///
/// Throws NumericalError on non-finite input or a singular system; `context`
/// is prepended to the message (e.g. the leaf's path).
LeafRegressor fit_ridge(const Eigen::Ref<const Eigen::MatrixXd>& D_l,
                        const Eigen::Ref<const Eigen::MatrixXd>& D_h, double lambda,
                        std::string_view context = {});

/// Ridge with a per-sample penalty on the sample-space coefficients:
///   alpha = (D_l D_l^T + diag(penalty))^-1 D_l y,  prediction = D_h^T alpha.
/// Computed in feature space as D_h^T W D_l (D_l^T W D_l + lambda I)^-1 with
/// W = lambda / penalty. A penalty equal to lambda everywhere gives W = I,
/// which is fit_ridge bit for bit.
LeafRegressor fit_weighted_ridge(const Eigen::Ref<const Eigen::MatrixXd>& D_l,
                                 const Eigen::Ref<const Eigen::MatrixXd>& D_h, double lambda,
                                 const Eigen::Ref<const Eigen::VectorXd>& penalty,
                                 std::string_view context = {});

}  // namespace farf
