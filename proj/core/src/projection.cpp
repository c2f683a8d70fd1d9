#include "farf/projection.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "farf/error.hpp"
#include "farf/rng.hpp"

namespace farf {

const char* to_string(ProjectionKind kind) {
  return kind == ProjectionKind::pca ? "pca" : "lsh";
}

ProjectionKind projection_kind_from_string(std::string_view name) {
  if (name == "pca") return ProjectionKind::pca;
  if (name == "lsh") return ProjectionKind::lsh;
  throw InvalidArgument("unknown projection kind '" + std::string(name) + "' (pca|lsh)");
}

Eigen::VectorXd ProjectionModel::project(const Eigen::Ref<const Eigen::VectorXd>& feature) const {
  if (feature.size() != matrix.cols()) {
    throw InvalidArgument("project: feature has dimension " + std::to_string(feature.size()) +
                          ", model expects " + std::to_string(matrix.cols()));
  }
  return matrix * (feature - mean);
}

RowMatrix ProjectionModel::project_rows(const Eigen::Ref<const RowMatrix>& samples) const {
  if (samples.cols() != matrix.cols()) {
    throw InvalidArgument("project: feature dimension mismatch");
  }
  return (samples.rowwise() - mean.transpose()) * matrix.transpose();
}

ProjectionModel fit_pca(const Eigen::Ref<const RowMatrix>& samples, int d_out) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (d_out < 1 || d_out > d) throw InvalidArgument("fit_pca: need 1 <= d_out <= d_in");
  if (n <= d_out) throw InvalidArgument("fit_pca: need more samples than output dimensions");

  ProjectionModel model;
  model.kind = ProjectionKind::pca;
  model.mean = samples.colwise().mean().transpose();
  const RowMatrix centered = samples.rowwise() - model.mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw NumericalError("fit_pca: eigen-decomposition failed");
  // Eigen sorts ascending; take from the back.
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double top = std::max(values(d - 1), 0.0);
  const double negligible = top * 1e-12 * static_cast<double>(d);

  model.matrix.resize(d_out, d);
  model.data_rank = 0;
  for (int k = 0; k < d_out; ++k) {
    Eigen::VectorXd axis = eig.eigenvectors().col(d - 1 - k);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    model.matrix.row(k) = axis.transpose();
    if (values(d - 1 - k) > negligible) ++model.data_rank;
  }
  return model;
}

ProjectionModel fit_lsh(int d_in, int d_out, std::uint64_t seed) {
  if (d_out < 1 || d_in < 1 || d_out > d_in) {
    throw InvalidArgument("fit_lsh: need 1 <= d_out <= d_in");
  }
  ProjectionModel model;
  model.kind = ProjectionKind::lsh;
  model.seed = seed;
  model.mean = Eigen::VectorXd::Zero(d_in);
  model.matrix.resize(d_out, d_in);
  model.data_rank = d_out;
  Rng rng(seed);
  for (int r = 0; r < d_out; ++r) {
    double norm2 = 0.0;
    do {
      for (int c = 0; c < d_in; ++c) model.matrix(r, c) = rng.normal();
      norm2 = model.matrix.row(r).squaredNorm();
    } while (norm2 == 0.0);
    model.matrix.row(r) /= std::sqrt(norm2);
  }
  return model;
}

}  // namespace farf
