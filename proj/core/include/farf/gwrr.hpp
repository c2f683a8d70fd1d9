#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "farf/gmm.hpp"
#include "farf/ridge.hpp"

namespace farf {

struct GwrrParams {
  int gmm_k = 3;
  double lambda_base = 0.01;
  /// Weights are clamped to [lambda_base / cap, lambda_base * cap].
  double cap = 10.0;
  /// Offset in the inverse-distance affinity 1 / (eps + |x - mu|).
  double eps = 1e-6;
  int gmm_max_iters = 50;
  /// Below gmm_k * this many samples the leaf falls back to plain ridge.
  int min_samples_per_component = 4;
};

/// Per-sample ridge penalties from the mixture. For sample i in its dominant
/// component k: r_i = pi_k / (eps + |x_i - mu_k|), and
/// w_i = lambda_base * clamp(mean(r) / r_i, 1/cap, cap). Samples in large
/// clusters near a center get smaller penalties.
Eigen::VectorXd gwrr_weights(const GmmModel& gmm, const Eigen::Ref<const Eigen::MatrixXd>& samples,
                             double lambda_base, double cap, double eps = 1e-6);

/// Fits a GMM on the leaf's features and solves the weighted ridge system.
/// Falls back to fit_ridge(lambda_base) for small leaves.
LeafRegressor fit_gwrr(const Eigen::Ref<const Eigen::MatrixXd>& D_l,
                       const Eigen::Ref<const Eigen::MatrixXd>& D_h, const GwrrParams& params,
                       std::uint64_t seed, std::string_view context = {});

}  // namespace farf
