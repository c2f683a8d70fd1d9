#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "farf/error.hpp"
#include "farf/gmm.hpp"
#include "farf/gwrr.hpp"
#include "farf/ridge.hpp"
#include "farf/rng.hpp"
#include "oracles.hpp"

namespace farf {
namespace {

Eigen::MatrixXd normal_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  Eigen::MatrixXd M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = rng.normal();
  return M;
}

double rel_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

double ridge_objective(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Dl,
                       const Eigen::MatrixXd& Dh, double lambda) {
  return (Dh.transpose() - P * Dl.transpose()).squaredNorm() + lambda * P.squaredNorm();
}

TEST(Ridge, RecoversExactLinearMap) {
  Rng rng(1);
  const Eigen::MatrixXd Dl = normal_matrix(6, 6, rng);
  const Eigen::MatrixXd M = normal_matrix(4, 6, rng);
  const Eigen::MatrixXd Dh = Dl * M.transpose();
  EXPECT_LT((fit_ridge(Dl, Dh, 0.0).P - M).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Ridge, HugeLambdaShrinksToZero) {
  Rng rng(2);
  const Eigen::MatrixXd Dl = normal_matrix(30, 8, rng), Dh = normal_matrix(30, 3, rng);
  const LeafRegressor r = fit_ridge(Dl, Dh, 1e12);
  EXPECT_LT(r.P.cwiseAbs().rowwise().sum().maxCoeff(), 1e-6);
}

TEST(Ridge, MatchesNormalEquationsOracle) {
  Rng rng(3);
  const Eigen::MatrixXd Dl = normal_matrix(50, 20, rng), Dh = normal_matrix(50, 9, rng);
  const LeafRegressor r = fit_ridge(Dl, Dh, 0.01);
  EXPECT_LT(rel_frobenius(r.P, oracle::ridge_normal_equations(Dl, Dh, 0.01)), 1e-8);
  EXPECT_EQ(r.n_samples, 50u);
  EXPECT_EQ(r.lambda_used, 0.01);
  EXPECT_FALSE(r.weighted);
}

TEST(Ridge, DualFormMatchesOracleWhenUnderdetermined) {
  Rng rng(4);
  const Eigen::MatrixXd Dl = normal_matrix(7, 25, rng), Dh = normal_matrix(7, 4, rng);
  EXPECT_LT(rel_frobenius(fit_ridge(Dl, Dh, 0.05).P, oracle::ridge_normal_equations(Dl, Dh, 0.05)),
            1e-8);
}

TEST(Ridge, SolutionIsUniqueMinimizer) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd Dl = normal_matrix(15, 5, rng), Dh = normal_matrix(15, 3, rng);
    const double lambda = 0.1;
    const Eigen::MatrixXd P = fit_ridge(Dl, Dh, lambda).P;
    const double best = ridge_objective(P, Dl, Dh, lambda);
    for (int k = 0; k < 5; ++k) {
      Eigen::MatrixXd dP = normal_matrix(3, 5, rng);
      dP *= 1e-3 / dP.norm();
      EXPECT_GT(ridge_objective(P + dP, Dl, Dh, lambda), best);
    }
  }
}

TEST(Ridge, Errors) {
  Rng rng(6);
  const Eigen::MatrixXd Dl = normal_matrix(3, 6, rng), Dh = normal_matrix(3, 2, rng);
  try {
    fit_ridge(Dl, Dh, 0.0, "tree 0 leaf 5");
    FAIL() << "singular system accepted";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("tree 0 leaf 5"), std::string::npos);
  }
  Eigen::MatrixXd bad = normal_matrix(10, 2, rng);
  bad(3, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(fit_ridge(bad, normal_matrix(10, 2, rng), 0.1), NumericalError);
  EXPECT_THROW(fit_ridge(Dl, normal_matrix(4, 2, rng), 0.1), InvalidArgument);
}

TEST(Ridge, PredictMatchesLoop) {
  Rng rng(7);
  LeafRegressor r;
  r.P = normal_matrix(5, 8, rng);
  const Eigen::VectorXd f = normal_matrix(8, 1, rng);
  const Eigen::VectorXd got = r.predict(f);
  for (int i = 0; i < 5; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 8; ++j) acc += r.P(i, j) * f[j];
    EXPECT_NEAR(got[i], acc, 1e-12);
  }
  EXPECT_EQ(r.predict(Eigen::VectorXd::Zero(8)), Eigen::VectorXd::Zero(5));
  EXPECT_THROW(r.predict(Eigen::VectorXd::Zero(7)), InvalidArgument);
  LeafRegressor id;
  id.P = Eigen::MatrixXd::Identity(3, 8);
  EXPECT_EQ(id.predict(f), f.head(3));
}

TEST(WeightedRidge, MatchesCramerSolveOnThreeSamples) {
  Rng rng(8);
  const Eigen::MatrixXd Dl = normal_matrix(3, 5, rng), Dh = normal_matrix(3, 2, rng);
  const Eigen::Vector3d penalty(0.02, 0.5, 0.1);
  const LeafRegressor r = fit_weighted_ridge(Dl, Dh, 0.1, penalty);
  const Eigen::MatrixXd want = oracle::weighted_ridge_3(Dl, Dh, penalty);
  EXPECT_LT((r.P - want).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, want.cwiseAbs().maxCoeff()));
  EXPECT_TRUE(r.weighted);
}

TEST(WeightedRidge, MatchesCramerSolveWhenOverdetermined) {
  // m = 3 samples in 2-D: feature-space path, same sample-space answer.
  Rng rng(9);
  const Eigen::MatrixXd Dl = normal_matrix(3, 2, rng), Dh = normal_matrix(3, 4, rng);
  const Eigen::Vector3d penalty(0.3, 0.03, 3.0);
  const LeafRegressor r = fit_weighted_ridge(Dl, Dh, 0.3, penalty);
  EXPECT_LT((r.P - oracle::weighted_ridge_3(Dl, Dh, penalty)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(WeightedRidge, UniformPenaltyIsPlainRidge) {
  Rng rng(10);
  const Eigen::MatrixXd Dl = normal_matrix(40, 12, rng), Dh = normal_matrix(40, 5, rng);
  const LeafRegressor w = fit_weighted_ridge(Dl, Dh, 0.01, Eigen::VectorXd::Constant(40, 0.01));
  EXPECT_EQ(w.P, fit_ridge(Dl, Dh, 0.01).P);
}

TEST(Gmm, SingleComponentIsClosedForm) {
  Rng rng(11);
  const Eigen::MatrixXd X = normal_matrix(200, 3, rng);
  const GmmModel g = fit_gmm(X, 1, 1);
  EXPECT_NEAR(g.weights[0], 1.0, 1e-12);
  const Eigen::RowVectorXd mean = X.colwise().mean();
  EXPECT_LT((g.means.row(0) - mean).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::RowVectorXd var = (X.rowwise() - mean).cwiseAbs2().colwise().mean();
  EXPECT_LT((g.variances.row(0) - var).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Gmm, RecoversTwoSeparatedBlobs) {
  Rng rng(12);
  Eigen::MatrixXd X(400, 1);
  for (int i = 0; i < 400; ++i) X(i, 0) = (i < 300 ? 0.0 : 100.0) + rng.normal();
  const GmmModel g = fit_gmm(X, 2, 3);
  const int lo = g.means(0, 0) < g.means(1, 0) ? 0 : 1;
  EXPECT_NEAR(g.means(lo, 0), 0.0, 0.5);
  EXPECT_NEAR(g.means(1 - lo, 0), 100.0, 0.5);
  EXPECT_NEAR(g.weights[lo], 0.75, 0.05);
  EXPECT_NEAR(g.weights[1 - lo], 0.25, 0.05);
}

TEST(Gmm, DeterministicMonotoneAndNormalized) {
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng(100 + trial);
    Eigen::MatrixXd X = normal_matrix(150, 4, rng);
    X.topRows(60).array() += 3.0;
    const GmmModel a = fit_gmm(X, 3, trial), b = fit_gmm(X, 3, trial);
    EXPECT_EQ(a.means, b.means);
    EXPECT_EQ(a.log_likelihood_trace, b.log_likelihood_trace);
    for (std::size_t t = 1; t < a.log_likelihood_trace.size(); ++t) {
      EXPECT_GE(a.log_likelihood_trace[t], a.log_likelihood_trace[t - 1] - 1e-9);
    }
    EXPECT_NEAR(a.weights.sum(), 1.0, 1e-9);
    EXPECT_GT(a.weights.minCoeff(), 0.0);
    EXPECT_GE(a.variances.minCoeff(), 1e-8);
    const Eigen::MatrixXd resp = a.responsibilities(X);
    EXPECT_LT((resp.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-9);
  }
}

TEST(Gmm, DuplicateSamplesStayValid) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Constant(20, 3, 0.25);
  X.row(0).setConstant(1.0);
  const GmmModel g = fit_gmm(X, 3, 1);
  EXPECT_NEAR(g.weights.sum(), 1.0, 1e-9);
  EXPECT_GT(g.weights.minCoeff(), 0.0);
  EXPECT_TRUE(g.means.allFinite());
}

TEST(GwrrWeights, IdenticalSamplesGetBaseWeight) {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Constant(12, 2, 0.3);
  const GmmModel g = fit_gmm(X, 2, 4);
  const Eigen::VectorXd w = gwrr_weights(g, X, 0.01, 10.0);
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(w[i], 0.01, 1e-15);
}

TEST(GwrrWeights, BigClusterCenterBeatsSmallClusterFringe) {
  // Hand-set mixture: big cluster (pi = 0.8) at 0, small (pi = 0.2) at 10.
  GmmModel g;
  g.weights = Eigen::Vector2d(0.8, 0.2);
  g.means = Eigen::MatrixXd(2, 1);
  g.means << 0.0, 10.0;
  g.variances = Eigen::MatrixXd::Constant(2, 1, 1.0);
  Eigen::MatrixXd X(3, 1);
  X << 0.1, 11.5, 10.5;
  const Eigen::VectorXd w = gwrr_weights(g, X, 0.01, 100.0);
  // r = pi / (eps + dist): 0.8 / 0.1 = 8, 0.2 / 1.5, 0.2 / 0.5.
  const double r0 = 0.8 / (1e-6 + 0.1), r1 = 0.2 / (1e-6 + 1.5), r2 = 0.2 / (1e-6 + 0.5);
  const double mean = (r0 + r1 + r2) / 3.0;
  EXPECT_NEAR(w[0], 0.01 * mean / r0, 1e-12);
  EXPECT_NEAR(w[1], 0.01 * mean / r1, 1e-12);
  EXPECT_LT(w[0], w[1]);
  EXPECT_LT(w[2], w[1]);
}

TEST(GwrrWeights, ClampedToCap) {
  Rng rng(13);
  const Eigen::MatrixXd X = normal_matrix(200, 3, rng);
  const GmmModel g = fit_gmm(X, 3, 5);
  const Eigen::VectorXd w = gwrr_weights(g, X, 0.02, 4.0);
  EXPECT_GE(w.minCoeff(), 0.02 / 4.0 - 1e-15);
  EXPECT_LE(w.maxCoeff(), 0.02 * 4.0 + 1e-15);
  EXPECT_EQ(gwrr_weights(g, X, 0.02, 1.0), Eigen::VectorXd::Constant(200, 0.02));
}

TEST(Gwrr, CapOneEqualsRidge) {
  Rng rng(14);
  const Eigen::MatrixXd Dl = normal_matrix(60, 10, rng), Dh = normal_matrix(60, 4, rng);
  GwrrParams p;
  p.cap = 1.0;
  EXPECT_LT((fit_gwrr(Dl, Dh, p, 3).P - fit_ridge(Dl, Dh, p.lambda_base).P).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Gwrr, SmallLeafFallsBackToRidge) {
  Rng rng(15);
  const Eigen::MatrixXd Dl = normal_matrix(11, 4, rng), Dh = normal_matrix(11, 2, rng);
  const LeafRegressor r = fit_gwrr(Dl, Dh, GwrrParams{}, 1);
  EXPECT_FALSE(r.weighted);
  EXPECT_EQ(r.P, fit_ridge(Dl, Dh, GwrrParams{}.lambda_base).P);
}

TEST(Gwrr, DeterministicForSeed) {
  Rng rng(16);
  const Eigen::MatrixXd Dl = normal_matrix(80, 6, rng), Dh = normal_matrix(80, 3, rng);
  EXPECT_EQ(fit_gwrr(Dl, Dh, GwrrParams{}, 9).P, fit_gwrr(Dl, Dh, GwrrParams{}, 9).P);
}

}  // namespace
}  // namespace farf
