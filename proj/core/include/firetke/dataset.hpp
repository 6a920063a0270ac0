#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "firetke/ingest.hpp"
#include "firetke/turbulence.hpp"

namespace firetke {

/// Per-column z-score parameters. An identity scaler (mean 0, std 1) leaves
/// data untouched; fit() learns parameters from a training matrix only.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd stdev;

  static Scaler identity(Eigen::Index columns);

  /// Learns column means and (population) standard deviations. Throws if a
  /// column has zero variance.
  static Scaler fit(const Eigen::MatrixXd& X,
                    const std::vector<std::string>& column_names = {});

  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd transform_row(const Eigen::VectorXd& x) const;
  bool is_identity() const;
};

/// Feature matrix plus target vector. Rows may carry timestamps and a
/// provenance tag naming the source dataset they came from.
struct Dataset {
  Eigen::MatrixXd X;  ///< N x 8, columns T1..T7, sonic_T
  Eigen::VectorXd y;
  std::vector<std::string> feature_names;
  std::string target_name;
  std::string label;
  std::vector<double> t;                 ///< optional, size N or empty
  std::vector<std::string> provenance;   ///< optional, size N or empty

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }

  /// Structural checks: finite entries, consistent sizes. Throws on failure.
  void validate() const;
};

enum class TargetKind { Tke, TkeMa };

std::string_view target_name(TargetKind kind);  // "tke" | "tke_ma"
TargetKind target_from_name(std::string_view name);

/// Builds the modeling table from segmented frames and their TKE series:
/// one row per frame in `phase` whose target value is defined. For the
/// moving-average target the first window-1 frames have no value and are
/// skipped.
Dataset build_dataset(std::span<const ingest::AlignedFrame> frames,
                      const turbulence::TkeSeries& series, TargetKind target,
                      ingest::BurnPhase phase = ingest::BurnPhase::Burn,
                      std::string label = {});

}  // namespace firetke
