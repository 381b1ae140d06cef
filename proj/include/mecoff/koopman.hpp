#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mecoff {

/// Linear operator on delay-embedded observables of a scalar series. A state
/// is q consecutive values ordered oldest to newest; the operator advances it
/// by one sample.
struct KoopmanModel {
  std::size_t embed_dim = 0;
  Eigen::MatrixXd op;
  double offset = 0.0;  // series mean when fitted with mean removal, else 0
  std::string state_label;

  /// Eigenvalues of the operator, i.e. the discrete-time DMD spectrum.
  std::vector<std::complex<double>> eigenvalues() const;
};

struct DmdOptions {
  std::size_t embed_dim = 8;
  bool remove_mean = false;
  double rcond = 1e-10;  // singular values below rcond * sigma_max are dropped
  std::string state_label = "series";
};

/// Least-squares fit op = X' pinv(X) over all delay-embedded snapshot pairs.
/// Needs at least embed_dim + 2 samples (InsufficientDataError otherwise).
KoopmanModel dmd_fit(std::span<const double> series, const DmdOptions& options);
KoopmanModel dmd_fit(std::span<const double> series, std::size_t embed_dim);

/// Iterates the operator `horizon` times from `recent` (exactly embed_dim
/// values, oldest first) and returns the newest coordinate of each iterate.
std::vector<double> dmd_predict(const KoopmanModel& model, std::span<const double> recent,
                                std::size_t horizon);

/// Prediction of series[t] from series[t-q .. t-1] for every t >= q.
std::vector<double> one_step_predictions(const KoopmanModel& model,
                                         std::span<const double> series);

double prediction_rmse(std::span<const double> predicted, std::span<const double> actual);

}  // namespace mecoff
