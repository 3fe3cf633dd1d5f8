#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "growform/rng.hpp"
#include "json.hpp"

namespace growform {

struct CmaEsOptions {
  int lambda = 40;
  int mu = 2;
  double sigma = 0.1;
  /// Scales the mean update only; 1 is standard CMA-ES, small values keep
  /// the mean near its start while the covariance still adapts.
  double learning_rate = 1.0;
  double sigma_max = std::numeric_limits<double>::infinity();
  /// Optional box; samples outside are redrawn up to `max_resamples` times
  /// and then clamped coordinate-wise.
  std::optional<Eigen::VectorXd> lower;
  std::optional<Eigen::VectorXd> upper;
  int max_resamples = 10;
};

/// (mu/mu_w, lambda)-CMA-ES minimizer with an ask/tell interface:
/// weighted recombination, rank-one and rank-mu covariance updates and
/// cumulative step-size adaptation.
class CmaEs {
 public:
  CmaEs(const Eigen::VectorXd &mean, const CmaEsOptions &options, std::uint64_t seed);

  /// Draws a new population (lambda points).
  const std::vector<Eigen::VectorXd> &ask();

  /// Updates the distribution from the objective values of the last ask(),
  /// lower is better. Non-finite values rank last.
  void tell(std::span<const double> values);

  const Eigen::VectorXd &mean() const { return mean_; }
  double sigma() const { return sigma_; }
  const Eigen::MatrixXd &covariance() const { return cov_; }
  int generation() const { return generation_; }
  int dimension() const { return static_cast<int>(mean_.size()); }
  int repairs() const { return repairs_; }
  const std::vector<double> &weights() const { return weights_; }
  double mu_eff() const { return mu_eff_; }

  nlohmann::json save_state() const;
  void load_state(const nlohmann::json &state);

 private:
  void decompose();

  CmaEsOptions opt_;
  Rng rng_;
  Eigen::VectorXd mean_;
  double sigma_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd basis_;       // eigenvectors of cov_
  Eigen::VectorXd scale_;       // sqrt of eigenvalues
  Eigen::MatrixXd inv_sqrt_;    // cov_^{-1/2}
  Eigen::VectorXd path_sigma_;
  Eigen::VectorXd path_c_;
  std::vector<double> weights_;
  double mu_eff_ = 0.0;
  double c_sigma_ = 0.0, d_sigma_ = 0.0, c_c_ = 0.0, c_1_ = 0.0, c_mu_ = 0.0, chi_n_ = 0.0;
  int generation_ = 0;
  int repairs_ = 0;
  std::vector<Eigen::VectorXd> population_;
};

}  // namespace growform
