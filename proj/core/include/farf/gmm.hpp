#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace farf {

/// Diagonal-covariance Gaussian mixture.
struct GmmModel {
  Eigen::VectorXd weights;    // K, positive, sums to 1
  Eigen::MatrixXd means;      // K x d
  Eigen::MatrixXd variances;  // K x d, each >= variance floor

  /// Total log-likelihood after each E-step, in iteration order.
  std::vector<double> log_likelihood_trace;
  int iterations = 0;
  int reseeded_components = 0;

  int components() const { return static_cast<int>(weights.size()); }
  int dimension() const { return static_cast<int>(means.cols()); }

  /// m x K posterior responsibilities; each row sums to 1.
  Eigen::MatrixXd responsibilities(const Eigen::Ref<const Eigen::MatrixXd>& samples) const;
  double log_likelihood(const Eigen::Ref<const Eigen::MatrixXd>& samples) const;
};

struct GmmOptions {
  int max_iters = 50;
  /// Stop when the mean per-sample log-likelihood improves by less than this.
  double tolerance = 1e-6;
  double variance_floor = 1e-8;
};

/// EM with k-means++-style seeded initialization. A component whose
/// responsibility mass vanishes is re-seeded on the sample farthest from its
/// closest mean.
GmmModel fit_gmm(const Eigen::Ref<const Eigen::MatrixXd>& samples, int K, std::uint64_t seed,
                 const GmmOptions& options = {});

}  // namespace farf
