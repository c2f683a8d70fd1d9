#include "farf/gmm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "farf/error.hpp"
#include "farf/rng.hpp"

namespace farf {
namespace {

// m x K matrix of log(pi_k) + log N(x_i | mu_k, diag(var_k)).
Eigen::MatrixXd weighted_log_densities(const GmmModel& g,
                                       const Eigen::Ref<const Eigen::MatrixXd>& X) {
  const Eigen::Index m = X.rows();
  const Eigen::Index K = g.weights.size();
  const double log2pi = std::log(2.0 * std::numbers::pi);
  Eigen::MatrixXd out(m, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Eigen::RowVectorXd inv_var = g.variances.row(k).cwiseInverse();
    const double log_norm =
        -0.5 * (static_cast<double>(X.cols()) * log2pi + g.variances.row(k).array().log().sum());
    const double log_pi = std::log(g.weights(k));
    const Eigen::VectorXd maha =
        (X.rowwise() - g.means.row(k)).array().square().matrix() * inv_var.transpose();
    out.col(k) = (log_pi + log_norm) - 0.5 * maha.array();
  }
  return out;
}

// Normalizes each row in log space; returns the total log-likelihood.
double normalize_rows(Eigen::MatrixXd& logp) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < logp.rows(); ++i) {
    const double mx = logp.row(i).maxCoeff();
    const double lse = mx + std::log((logp.row(i).array() - mx).exp().sum());
    logp.row(i) = (logp.row(i).array() - lse).exp();
    total += lse;
  }
  return total;
}

void m_step(GmmModel& g, const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::MatrixXd& resp,
            const Eigen::RowVectorXd& global_var, const GmmOptions& opt) {
  const Eigen::Index m = X.rows();
  const Eigen::Index K = resp.cols();
  std::vector<Eigen::Index> empty;
  for (Eigen::Index k = 0; k < K; ++k) {
    const double nk = resp.col(k).sum();
    if (!(nk > 1e-10 * static_cast<double>(m))) {
      empty.push_back(k);
      continue;
    }
    const Eigen::RowVectorXd mu = (resp.col(k).transpose() * X) / nk;
    const Eigen::RowVectorXd var =
        (resp.col(k).transpose() * (X.rowwise() - mu).array().square().matrix()) / nk;
    g.means.row(k) = mu;
    g.variances.row(k) = var.cwiseMax(opt.variance_floor);
    g.weights(k) = nk / static_cast<double>(m);
  }
  for (Eigen::Index k : empty) {
    // Re-seed on the sample farthest from every surviving mean.
    Eigen::Index farthest = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < K; ++j) {
        if (j == k) continue;
        nearest = std::min(nearest, (X.row(i) - g.means.row(j)).squaredNorm());
      }
      if (nearest > best) {
        best = nearest;
        farthest = i;
      }
    }
    g.means.row(k) = X.row(farthest);
    g.variances.row(k) = global_var.cwiseMax(opt.variance_floor);
    g.weights(k) = 1.0 / static_cast<double>(m);
    ++g.reseeded_components;
  }
  g.weights /= g.weights.sum();
}

}  // namespace

Eigen::MatrixXd GmmModel::responsibilities(const Eigen::Ref<const Eigen::MatrixXd>& samples) const {
  Eigen::MatrixXd logp = weighted_log_densities(*this, samples);
  normalize_rows(logp);
  return logp;
}

double GmmModel::log_likelihood(const Eigen::Ref<const Eigen::MatrixXd>& samples) const {
  Eigen::MatrixXd logp = weighted_log_densities(*this, samples);
  return normalize_rows(logp);
}

GmmModel fit_gmm(const Eigen::Ref<const Eigen::MatrixXd>& X, int K, std::uint64_t seed,
                 const GmmOptions& opt) {
  const Eigen::Index m = X.rows();
  const Eigen::Index d = X.cols();
  if (K < 1 || m < K) {
    throw InvalidArgument("fit_gmm: need m >= K >= 1 (m=" + std::to_string(m) +
                          ", K=" + std::to_string(K) + ")");
  }
  if (!X.allFinite()) throw NumericalError("fit_gmm: non-finite samples");

  const Eigen::RowVectorXd global_mean = X.colwise().mean();
  const Eigen::RowVectorXd global_var =
      (X.rowwise() - global_mean).array().square().colwise().mean();

  // k-means++ seeding.
  Rng rng(seed);
  std::vector<Eigen::Index> centers{static_cast<Eigen::Index>(rng.below(m))};
  Eigen::VectorXd d2 = (X.rowwise() - X.row(centers[0])).rowwise().squaredNorm();
  while (static_cast<int>(centers.size()) < K) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double run = 0.0;
      pick = m - 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        run += d2(i);
        if (run > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(m));
    }
    centers.push_back(pick);
    d2 = d2.cwiseMin((X.rowwise() - X.row(pick)).rowwise().squaredNorm());
  }

  // Hard assignment to the nearest seed, then a first M-step.
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(m, K);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      const double dist = (X.row(i) - X.row(centers[k])).squaredNorm();
      if (dist < best_d) {
        best_d = dist;
        best = k;
      }
    }
    resp(i, best) = 1.0;
  }

  GmmModel g;
  g.weights = Eigen::VectorXd::Constant(K, 1.0 / K);
  g.means = Eigen::MatrixXd::Zero(K, d);
  g.variances = Eigen::MatrixXd::Ones(K, d);
  for (int k = 0; k < K; ++k) g.means.row(k) = X.row(centers[k]);
  m_step(g, X, resp, global_var, opt);

  for (int t = 0;; ++t) {
    resp = weighted_log_densities(g, X);
    const double ll = normalize_rows(resp);
    g.log_likelihood_trace.push_back(ll);
    const std::size_t n = g.log_likelihood_trace.size();
    const bool converged =
        n >= 2 &&
        (ll - g.log_likelihood_trace[n - 2]) / static_cast<double>(m) < opt.tolerance;
    if (converged || t >= opt.max_iters) break;
    m_step(g, X, resp, global_var, opt);
    ++g.iterations;
  }
  return g;
}

}  // namespace farf
