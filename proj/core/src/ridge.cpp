#include "farf/ridge.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "farf/error.hpp"

namespace farf {
namespace {

std::string prefixed(std::string_view context, const std::string& msg) {
  if (context.empty()) return msg;
  return std::string(context) + ": " + msg;
}

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, bool check_rank,
                          std::string_view context) {
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  bool ok = llt.info() == Eigen::Success;
  if (ok && check_rank) {
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    const double hi = diag.maxCoeff();
    const double lo = diag.minCoeff();
    ok = lo > 0.0 && lo * lo > 1e-14 * hi * hi;
  }
  if (!ok) {
    throw NumericalError(prefixed(context, "singular normal matrix (" +
                                               std::to_string(A.rows()) + "x" +
                                               std::to_string(A.cols()) + ")"));
  }
  return llt.solve(B);
}

// P = D_h^T W D_l (D_l^T W D_l + lambda I)^-1; `w` empty means W = I.
Eigen::MatrixXd solve_projection(const Eigen::Ref<const Eigen::MatrixXd>& D_l,
                                 const Eigen::Ref<const Eigen::MatrixXd>& D_h, double lambda,
                                 const Eigen::VectorXd& w, std::string_view context) {
  const Eigen::Index m = D_l.rows();
  const Eigen::Index d = D_l.cols();
  const bool weighted = w.size() > 0;
  const bool singular_possible = lambda == 0.0;

  if (lambda > 0.0 && m < d) {
    // Sample-space form: P^T = Ls^T (Ls Ls^T + lambda I)^-1 Hs with Ls = sqrt(W) D_l.
    Eigen::MatrixXd Ls = D_l;
    Eigen::MatrixXd Hs = D_h;
    if (weighted) {
      const Eigen::VectorXd s = w.cwiseSqrt();
      Ls = s.asDiagonal() * Ls;
      Hs = s.asDiagonal() * Hs;
    }
    Eigen::MatrixXd K = Ls * Ls.transpose();
    K.diagonal().array() += lambda;
    return (Ls.transpose() * solve_spd(K, Hs, singular_possible, context)).transpose();
  }

  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  if (weighted) {
    const Eigen::MatrixXd WL = w.asDiagonal() * D_l;
    A = D_l.transpose() * WL;
    B = WL.transpose() * D_h;
  } else {
    A = D_l.transpose() * D_l;
    B = D_l.transpose() * D_h;
  }
  A.diagonal().array() += lambda;
  return solve_spd(A, B, singular_possible, context).transpose();
}

void check_inputs(const Eigen::Ref<const Eigen::MatrixXd>& D_l,
                  const Eigen::Ref<const Eigen::MatrixXd>& D_h, double lambda,
                  std::string_view context) {
  if (D_l.rows() < 1 || D_l.rows() != D_h.rows()) {
    throw InvalidArgument(prefixed(context, "ridge: sample counts differ or are zero"));
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument(prefixed(context, "ridge: lambda must be finite and >= 0"));
  }
  if (!D_l.allFinite() || !D_h.allFinite()) {
    throw NumericalError(prefixed(context, "ridge: non-finite input"));
  }
}

}  // namespace

Eigen::VectorXd LeafRegressor::predict(const Eigen::Ref<const Eigen::VectorXd>& feature) const {
  if (feature.size() != P.cols()) {
    throw InvalidArgument("predict: feature has dimension " + std::to_string(feature.size()) +
                          ", regressor expects " + std::to_string(P.cols()));
  }
  return P * feature;
}

LeafRegressor fit_ridge(const Eigen::Ref<const Eigen::MatrixXd>& D_l,
                        const Eigen::Ref<const Eigen::MatrixXd>& D_h, double lambda,
                        std::string_view context) {
  check_inputs(D_l, D_h, lambda, context);
  LeafRegressor reg;
  reg.P = solve_projection(D_l, D_h, lambda, Eigen::VectorXd(), context);
  reg.n_samples = static_cast<std::size_t>(D_l.rows());
  reg.lambda_used = lambda;
  reg.weighted = false;
  return reg;
}

LeafRegressor fit_weighted_ridge(const Eigen::Ref<const Eigen::MatrixXd>& D_l,
                                 const Eigen::Ref<const Eigen::MatrixXd>& D_h, double lambda,
                                 const Eigen::Ref<const Eigen::VectorXd>& penalty,
                                 std::string_view context) {
  check_inputs(D_l, D_h, lambda, context);
  if (!(lambda > 0.0)) {
    throw InvalidArgument(prefixed(context, "weighted ridge: lambda must be positive"));
  }
  if (penalty.size() != D_l.rows()) {
    throw InvalidArgument(prefixed(context, "weighted ridge: one penalty per sample required"));
  }
  if (!penalty.allFinite() || (penalty.array() <= 0.0).any()) {
    throw InvalidArgument(prefixed(context, "weighted ridge: penalties must be positive"));
  }
  Eigen::VectorXd w = lambda * penalty.cwiseInverse();
  const bool uniform = (penalty.array() == lambda).all();
  if (uniform) w.resize(0);

  LeafRegressor reg;
  reg.P = solve_projection(D_l, D_h, lambda, w, context);
  reg.n_samples = static_cast<std::size_t>(D_l.rows());
  reg.lambda_used = lambda;
  reg.weighted = !uniform;
  return reg;
}

}  // namespace farf
