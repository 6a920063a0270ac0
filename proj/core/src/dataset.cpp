#include "firetke/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace firetke {

Scaler Scaler::identity(Eigen::Index columns) {
  Scaler s;
  s.mean = Eigen::VectorXd::Zero(columns);
  s.stdev = Eigen::VectorXd::Ones(columns);
  return s;
}

Scaler Scaler::fit(const Eigen::MatrixXd& X,
                   const std::vector<std::string>& column_names) {
  if (X.rows() < 1) throw std::invalid_argument("Scaler::fit: empty matrix");
  Scaler s;
  s.mean = X.colwise().mean();
  s.stdev.resize(X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double var =
        (X.col(c).array() - s.mean(c)).square().sum() / static_cast<double>(X.rows());
    s.stdev(c) = std::sqrt(var);
    if (!(s.stdev(c) > 0.0)) {
      const std::string name = c < static_cast<Eigen::Index>(column_names.size())
                                   ? column_names[static_cast<std::size_t>(c)]
                                   : fmt::format("column {}", c);
      throw std::runtime_error(
          fmt::format("Scaler::fit: {} has zero variance", name));
    }
  }
  return s;
}

Eigen::MatrixXd Scaler::transform(const Eigen::MatrixXd& X) const {
  if (X.cols() != mean.size())
    throw std::invalid_argument(
        fmt::format("Scaler::transform: expected {} columns, got {}",
                    mean.size(), X.cols()));
  return (X.rowwise() - mean.transpose()).array().rowwise() /
         stdev.transpose().array();
}

Eigen::VectorXd Scaler::transform_row(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size())
    throw std::invalid_argument("Scaler::transform_row: size mismatch");
  return (x - mean).cwiseQuotient(stdev);
}

bool Scaler::is_identity() const {
  return mean.isZero(0.0) && (stdev.array() == 1.0).all();
}

void Dataset::validate() const {
  if (y.size() != X.rows())
    throw std::runtime_error("Dataset: target length does not match row count");
  if (!feature_names.empty() &&
      static_cast<Eigen::Index>(feature_names.size()) != X.cols())
    throw std::runtime_error("Dataset: feature name count does not match columns");
  if (!t.empty() && static_cast<Eigen::Index>(t.size()) != X.rows())
    throw std::runtime_error("Dataset: timestamp count does not match rows");
  if (!provenance.empty() &&
      static_cast<Eigen::Index>(provenance.size()) != X.rows())
    throw std::runtime_error("Dataset: provenance count does not match rows");
  if (!X.allFinite() || !y.allFinite())
    throw std::runtime_error("Dataset: non-finite entries");
}

std::string_view target_name(TargetKind kind) {
  return kind == TargetKind::Tke ? "tke" : "tke_ma";
}

TargetKind target_from_name(std::string_view name) {
  if (name == "tke") return TargetKind::Tke;
  if (name == "tke_ma") return TargetKind::TkeMa;
  throw std::invalid_argument(fmt::format("unknown target \"{}\"", name));
}

Dataset build_dataset(std::span<const ingest::AlignedFrame> frames,
                      const turbulence::TkeSeries& series, TargetKind target,
                      ingest::BurnPhase phase, std::string label) {
  if (frames.size() != series.tke.size())
    throw std::invalid_argument(
        "build_dataset: frames and TKE series must have equal length");

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].phase != phase) continue;
    if (target == TargetKind::TkeMa && !series.tke_ma[i]) continue;
    keep.push_back(i);
  }

  Dataset ds;
  ds.X.resize(static_cast<Eigen::Index>(keep.size()), ingest::kFeatureCount);
  ds.y.resize(static_cast<Eigen::Index>(keep.size()));
  ds.t.reserve(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const auto& frame = frames[keep[r]];
    for (int c = 0; c < ingest::kFeatureCount; ++c)
      ds.X(static_cast<Eigen::Index>(r), c) = frame.features[static_cast<std::size_t>(c)];
    ds.y(static_cast<Eigen::Index>(r)) = target == TargetKind::Tke
                                             ? series.tke[keep[r]]
                                             : *series.tke_ma[keep[r]];
    ds.t.push_back(frame.t);
  }
  for (const auto name : ingest::feature_names()) ds.feature_names.emplace_back(name);
  ds.target_name = target_name(target);
  ds.label = std::move(label);
  ds.validate();
  return ds;
}

}  // namespace firetke
