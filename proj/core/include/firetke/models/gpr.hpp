#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace firetke::models {

struct GprParams {
  double length_scale = 1.0;
  double signal_var = 1.0;
  double noise_var = 1e-2;
  bool center_target = true;  ///< subtract the training mean, restore on output
  bool elastic_net = false;   ///< use the penalized weight-space predictor
  double en_l1 = 0.0;
  double en_l2 = 0.0;
  int en_max_sweeps = 10000;
  double en_tol = 1e-8;
};

/// Squared-exponential covariance s^2 exp(-|x-x'|^2 / (2 l^2)).
double se_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                 const Eigen::Ref<const Eigen::RowVectorXd>& b,
                 const GprParams& params);

/// Kernel matrix between the rows of A and B.
Eigen::MatrixXd se_kernel_matrix(const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B,
                                 const GprParams& params);

struct GprPrediction {
  double mean = 0.0;
  double variance = 0.0;  ///< clamped to be non-negative
};

/// Exact GP posterior state. The noisy kernel matrix is factored once
/// (Cholesky, never an explicit inverse); predictions are dot products
/// against alpha plus one triangular solve for the variance.
struct GprFit {
  GprParams params;
  Eigen::MatrixXd X;      ///< training inputs (scaled space)
  Eigen::MatrixXd L;      ///< lower Cholesky factor of K + (noise+jitter) I
  Eigen::VectorXd alpha;  ///< (K + noise I)^{-1} (y - offset)
  double y_offset = 0.0;
  double jitter = 0.0;    ///< diagonal boost that was needed, 0 if none

  double predict_mean(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  /// Posterior variance before clamping; may be a hair negative from
  /// factorization round-off.
  double raw_variance(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  GprPrediction predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd predict_means(const Eigen::MatrixXd& queries) const;
};

/// Factors K + noise I, escalating a diagonal jitter from 1e-10 by decades
/// up to 1e-4 if the factorization reports a non-positive pivot.
GprFit fit_gpr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const GprParams& params);

/// Penalized weight-space variant: w minimizes
///   1/2 |y - K w|^2 + l1 |w|_1 + l2 |w|_2^2
/// by cyclic coordinate descent with soft thresholding.
struct GprElasticFit {
  GprParams params;
  Eigen::MatrixXd X;
  Eigen::VectorXd w;
  double y_offset = 0.0;
  int sweeps = 0;

  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd predict_means(const Eigen::MatrixXd& queries) const;
};

GprElasticFit fit_gpr_elastic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const GprParams& params);

/// The bare solver, exposed so alternative kernel systems can reuse it.
/// Stops when the largest coordinate change in a sweep drops below tol;
/// throws (reporting the final step and residual norm) if max_sweeps is
/// exhausted first.
Eigen::VectorXd elastic_net_cd(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                               double l1, double l2, double tol, int max_sweeps,
                               int* sweeps_out = nullptr);

}  // namespace firetke::models
