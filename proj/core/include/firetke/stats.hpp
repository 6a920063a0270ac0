#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "firetke/dataset.hpp"

namespace firetke::stats {

/// Product-moment correlation. Throws on length mismatch, fewer than two
/// points, or zero variance in either series (the coefficient is undefined
/// there, not zero).
double pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks with ties assigned the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Rank correlation: Pearson coefficient of the average-rank transforms.
double spearman(std::span<const double> x, std::span<const double> y);

double r_squared(std::span<const double> y_true, std::span<const double> y_pred);
double mse(std::span<const double> y_true, std::span<const double> y_pred);
double mae(std::span<const double> y_true, std::span<const double> y_pred);

/// Pairwise coefficients across all feature columns plus the target.
/// Matrices are symmetric with an exact unit diagonal.
struct CorrelationMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd pearson;
  Eigen::MatrixXd spearman;
};

CorrelationMatrix correlation_matrix(const Dataset& dataset);

/// Linear-interpolation quantile of an ascending-sorted series, p in [0,1].
double quantile(std::span<const double> sorted, double p);

/// Gaussian-kernel density estimate on an even grid spanning the data range
/// plus five bandwidths on each side.
struct KdeEstimate {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

/// Bandwidth rule: 0.9 * min(sd, IQR/1.34) * n^(-1/5), falling back to sd
/// when the IQR collapses to zero. Throws when all values are identical.
double silverman_bandwidth(std::span<const double> values);

KdeEstimate kde(std::span<const double> residuals, int grid_points = 256);

void write_correlation_csv(const std::filesystem::path& path,
                           const std::vector<std::string>& labels,
                           const Eigen::MatrixXd& matrix);
void write_kde_csv(const std::filesystem::path& path, const KdeEstimate& estimate);

}  // namespace firetke::stats
