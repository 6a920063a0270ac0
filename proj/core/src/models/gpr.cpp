#include "firetke/models/gpr.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace firetke::models {

double se_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                 const Eigen::Ref<const Eigen::RowVectorXd>& b,
                 const GprParams& params) {
  const double d2 = (a - b).squaredNorm();
  return params.signal_var *
         std::exp(-d2 / (2.0 * params.length_scale * params.length_scale));
}

Eigen::MatrixXd se_kernel_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const GprParams& params) {
  const Eigen::VectorXd a2 = A.rowwise().squaredNorm();
  const Eigen::VectorXd b2 = B.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = (-2.0 * A * B.transpose());
  d2.colwise() += a2;
  d2.rowwise() += b2.transpose();
  d2 = d2.cwiseMax(0.0);  // Gram round-off can dip slightly below zero
  const double inv = -1.0 / (2.0 * params.length_scale * params.length_scale);
  return params.signal_var * (d2 * inv).array().exp();
}

double GprFit::predict_mean(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  const Eigen::VectorXd k_star = se_kernel_matrix(X, x, params).col(0);
  return k_star.dot(alpha) + y_offset;
}

double GprFit::raw_variance(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  const Eigen::VectorXd k_star = se_kernel_matrix(X, x, params).col(0);
  const Eigen::VectorXd v =
      L.triangularView<Eigen::Lower>().solve(k_star);
  return se_kernel(x, x, params) - v.squaredNorm();
}

GprPrediction GprFit::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  GprPrediction p;
  p.mean = predict_mean(x);
  p.variance = std::max(raw_variance(x), 0.0);
  return p;
}

Eigen::VectorXd GprFit::predict_means(const Eigen::MatrixXd& queries) const {
  return se_kernel_matrix(queries, X, params) * alpha +
         Eigen::VectorXd::Constant(queries.rows(), y_offset);
}

GprFit fit_gpr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               const GprParams& params) {
  if (X.rows() != y.size())
    throw std::invalid_argument("fit_gpr: X and y row counts differ");
  if (X.rows() < 1) throw std::invalid_argument("fit_gpr: empty training set");
  if (!(params.length_scale > 0.0) || !(params.signal_var > 0.0) ||
      params.noise_var < 0.0)
    throw std::invalid_argument("fit_gpr: invalid kernel parameters");

  GprFit fit;
  fit.params = params;
  fit.X = X;
  fit.y_offset = params.center_target ? y.mean() : 0.0;
  const Eigen::VectorXd y_centered = y.array() - fit.y_offset;

  const Eigen::MatrixXd K = se_kernel_matrix(X, X, params);
  const Eigen::Index n = X.rows();

  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd noisy = K;
    noisy.diagonal().array() += params.noise_var + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(noisy);
    if (llt.info() == Eigen::Success) {
      fit.L = llt.matrixL();
      fit.alpha = llt.solve(y_centered);
      fit.jitter = jitter;
      return fit;
    }
    if (jitter == 0.0)
      jitter = 1e-10;
    else if (jitter < 1e-4)
      jitter *= 10.0;
    else
      throw std::runtime_error(fmt::format(
          "fit_gpr: kernel matrix ({}x{}) not positive definite even with "
          "jitter 1e-4",
          n, n));
  }
}

double GprElasticFit::predict_one(
    const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  const Eigen::VectorXd k_star = se_kernel_matrix(X, x, params).col(0);
  return k_star.dot(w) + y_offset;
}

Eigen::VectorXd GprElasticFit::predict_means(const Eigen::MatrixXd& queries) const {
  return se_kernel_matrix(queries, X, params) * w +
         Eigen::VectorXd::Constant(queries.rows(), y_offset);
}

Eigen::VectorXd elastic_net_cd(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                               double l1, double l2, double tol, int max_sweeps,
                               int* sweeps_out) {
  if (K.rows() != y.size())
    throw std::invalid_argument("elastic_net_cd: K and y sizes differ");
  if (l1 < 0.0 || l2 < 0.0)
    throw std::invalid_argument("elastic_net_cd: penalties must be >= 0");
  if (max_sweeps < 1 || !(tol > 0.0))
    throw std::invalid_argument("elastic_net_cd: bad stopping parameters");

  const Eigen::Index m = K.cols();
  const Eigen::VectorXd col_sq = K.colwise().squaredNorm();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd residual = y;

  double max_step = 0.0;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    max_step = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double z = K.col(j).dot(residual) + col_sq(j) * w(j);
      const double mag = std::abs(z) - l1;
      const double w_new =
          mag > 0.0 ? std::copysign(mag, z) / (col_sq(j) + 2.0 * l2) : 0.0;
      const double delta = w_new - w(j);
      if (delta != 0.0) {
        residual -= delta * K.col(j);
        w(j) = w_new;
      }
      max_step = std::max(max_step, std::abs(delta));
    }
    if (max_step < tol) {
      if (sweeps_out != nullptr) *sweeps_out = sweep;
      return w;
    }
  }
  throw std::runtime_error(fmt::format(
      "elastic_net_cd: no convergence after {} sweeps (last max step {:.3e}, "
      "residual norm {:.6e})",
      max_sweeps, max_step, residual.norm()));
}

GprElasticFit fit_gpr_elastic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const GprParams& params) {
  if (X.rows() != y.size())
    throw std::invalid_argument("fit_gpr_elastic: X and y row counts differ");
  if (X.rows() < 1)
    throw std::invalid_argument("fit_gpr_elastic: empty training set");

  GprElasticFit fit;
  fit.params = params;
  fit.X = X;
  fit.y_offset = params.center_target ? y.mean() : 0.0;
  const Eigen::VectorXd y_centered = y.array() - fit.y_offset;
  const Eigen::MatrixXd K = se_kernel_matrix(X, X, params);
  fit.w = elastic_net_cd(K, y_centered, params.en_l1, params.en_l2,
                         params.en_tol, params.en_max_sweeps, &fit.sweeps);
  return fit;
}

}  // namespace firetke::models
