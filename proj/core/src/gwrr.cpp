#include "farf/gwrr.hpp"

#include <algorithm>

#include "farf/error.hpp"

namespace farf {

Eigen::VectorXd gwrr_weights(const GmmModel& gmm, const Eigen::Ref<const Eigen::MatrixXd>& X,
                             double lambda_base, double cap, double eps) {
  if (X.cols() != gmm.dimension()) {
    throw InvalidArgument("gwrr_weights: samples and mixture dimensions differ");
  }
  if (!(cap >= 1.0)) throw InvalidArgument("gwrr_weights: cap must be >= 1");
  const Eigen::MatrixXd resp = gmm.responsibilities(X);
  const Eigen::Index m = X.rows();

  Eigen::VectorXd affinity(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index k = 0;
    resp.row(i).maxCoeff(&k);
    const double dist = (X.row(i) - gmm.means.row(k)).norm();
    affinity(i) = gmm.weights(k) / (eps + dist);
  }
  const double mean_affinity = affinity.mean();
  Eigen::VectorXd w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    w(i) = lambda_base * std::clamp(mean_affinity / affinity(i), 1.0 / cap, cap);
  }
  return w;
}

LeafRegressor fit_gwrr(const Eigen::Ref<const Eigen::MatrixXd>& D_l,
                       const Eigen::Ref<const Eigen::MatrixXd>& D_h, const GwrrParams& params,
                       std::uint64_t seed, std::string_view context) {
  const Eigen::Index min_samples =
      static_cast<Eigen::Index>(params.gmm_k) * params.min_samples_per_component;
  if (D_l.rows() < min_samples) {
    return fit_ridge(D_l, D_h, params.lambda_base, context);
  }
  GmmOptions opt;
  opt.max_iters = params.gmm_max_iters;
  const GmmModel gmm = fit_gmm(D_l, params.gmm_k, seed, opt);
  const Eigen::VectorXd w = gwrr_weights(gmm, D_l, params.lambda_base, params.cap, params.eps);
  return fit_weighted_ridge(D_l, D_h, params.lambda_base, w, context);
}

}  // namespace farf
