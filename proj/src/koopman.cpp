#include "mecoff/koopman.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mecoff/errors.hpp"

namespace mecoff {

std::vector<std::complex<double>> KoopmanModel::eigenvalues() const {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(op, /*computeEigenvectors=*/false);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

KoopmanModel dmd_fit(std::span<const double> series, const DmdOptions& options) {
  const std::size_t q = options.embed_dim;
  if (q == 0) throw DomainError("embed_dim must be positive");
  if (series.size() < q + 2) {
    throw InsufficientDataError("dmd_fit needs at least embed_dim + 2 = " + std::to_string(q + 2) +
                                " samples, got " + std::to_string(series.size()));
  }

  KoopmanModel model;
  model.embed_dim = q;
  model.state_label = options.state_label;
  if (options.remove_mean) {
    model.offset = std::accumulate(series.begin(), series.end(), 0.0) /
                   static_cast<double>(series.size());
  }

  const auto snapshots = static_cast<Eigen::Index>(series.size() - q);
  const auto rows = static_cast<Eigen::Index>(q);
  Eigen::MatrixXd x(rows, snapshots);
  Eigen::MatrixXd x_next(rows, snapshots);
  for (Eigen::Index j = 0; j < snapshots; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      x(i, j) = series[static_cast<std::size_t>(j + i)] - model.offset;
      x_next(i, j) = series[static_cast<std::size_t>(j + i + 1)] - model.offset;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? options.rcond * sigma(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;

  if (rank == 0) {
    model.op = Eigen::MatrixXd::Zero(rows, rows);
    return model;
  }
  const Eigen::MatrixXd u = svd.matrixU().leftCols(rank);
  const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  const Eigen::VectorXd inv_sigma = sigma.head(rank).cwiseInverse();
  model.op = x_next * v * inv_sigma.asDiagonal() * u.transpose();
  if (!model.op.allFinite()) throw DomainError("dmd_fit produced a non-finite operator");
  return model;
}

KoopmanModel dmd_fit(std::span<const double> series, std::size_t embed_dim) {
  DmdOptions options;
  options.embed_dim = embed_dim;
  return dmd_fit(series, options);
}

std::vector<double> dmd_predict(const KoopmanModel& model, std::span<const double> recent,
                                std::size_t horizon) {
  if (recent.size() != model.embed_dim) {
    throw ShapeError("dmd_predict needs exactly " + std::to_string(model.embed_dim) +
                     " history values, got " + std::to_string(recent.size()));
  }
  Eigen::VectorXd state(static_cast<Eigen::Index>(recent.size()));
  for (std::size_t i = 0; i < recent.size(); ++i) {
    state(static_cast<Eigen::Index>(i)) = recent[i] - model.offset;
  }
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    state = model.op * state;
    out.push_back(state(state.size() - 1) + model.offset);
  }
  return out;
}

std::vector<double> one_step_predictions(const KoopmanModel& model,
                                         std::span<const double> series) {
  std::vector<double> out;
  const std::size_t q = model.embed_dim;
  for (std::size_t t = q; t < series.size(); ++t) {
    out.push_back(dmd_predict(model, series.subspan(t - q, q), 1).front());
  }
  return out;
}

double prediction_rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) {
    throw ShapeError("prediction_rmse: length mismatch (" + std::to_string(predicted.size()) +
                     " vs " + std::to_string(actual.size()) + ")");
  }
  if (predicted.empty()) throw ShapeError("prediction_rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - actual[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

}  // namespace mecoff
