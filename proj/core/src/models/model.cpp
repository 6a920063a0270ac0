#include "firetke/models/model.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace firetke::models {

std::string_view kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Dnn: return "dnn";
    case ModelKind::RandomForest: return "rf";
    case ModelKind::Knn: return "knn";
    case ModelKind::GradientBoost: return "gb";
    case ModelKind::Gpr: return "gpr";
    case ModelKind::XgBoost: return "xgb";
  }
  return "unknown";
}

std::string_view kind_display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Dnn: return "DNN";
    case ModelKind::RandomForest: return "RFR";
    case ModelKind::Knn: return "KNN";
    case ModelKind::GradientBoost: return "GBR";
    case ModelKind::Gpr: return "GPR";
    case ModelKind::XgBoost: return "XGB";
  }
  return "?";
}

ModelKind kind_from_name(std::string_view name) {
  for (ModelKind kind : kAllKinds)
    if (name == kind_name(kind)) return kind;
  throw std::invalid_argument(fmt::format("unknown model kind \"{}\"", name));
}

bool ModelConfig::standardize_effective() const {
  if (standardize.has_value()) return *standardize;
  switch (kind) {
    case ModelKind::Knn:
    case ModelKind::Gpr:
    case ModelKind::Dnn:
      return true;
    default:
      return false;
  }
}

void ModelConfig::validate() const {
  switch (kind) {
    case ModelKind::Knn:
      if (knn.k < 1) throw std::invalid_argument("knn: k must be >= 1");
      break;
    case ModelKind::RandomForest:
      if (forest.n_trees < 1)
        throw std::invalid_argument("rf: n_trees must be >= 1");
      if (forest.min_leaf < 1)
        throw std::invalid_argument("rf: min_leaf must be >= 1");
      break;
    case ModelKind::GradientBoost:
    case ModelKind::XgBoost:
      if (boost.stages < 1) throw std::invalid_argument("boost: stages must be >= 1");
      if (boost.shrinkage < 0.0 || boost.shrinkage > 1.0)
        throw std::invalid_argument("boost: shrinkage must be in [0, 1]");
      if (boost.min_leaf < 1)
        throw std::invalid_argument("boost: min_leaf must be >= 1");
      if (boost.gamma < 0.0 || boost.leaf_l2 < 0.0)
        throw std::invalid_argument("boost: gamma and leaf penalty must be >= 0");
      break;
    case ModelKind::Gpr:
      if (!(gpr.length_scale > 0.0))
        throw std::invalid_argument("gpr: length_scale must be > 0");
      if (!(gpr.signal_var > 0.0))
        throw std::invalid_argument("gpr: signal_var must be > 0");
      if (gpr.noise_var < 0.0)
        throw std::invalid_argument("gpr: noise_var must be >= 0");
      if (gpr.en_l1 < 0.0 || gpr.en_l2 < 0.0)
        throw std::invalid_argument("gpr: elastic-net penalties must be >= 0");
      if (gpr.en_max_sweeps < 1)
        throw std::invalid_argument("gpr: en_max_sweeps must be >= 1");
      break;
    case ModelKind::Dnn:
      for (int h : mlp.hidden)
        if (h < 1) throw std::invalid_argument("dnn: hidden sizes must be >= 1");
      if (mlp.l1_hidden3 < 0.0)
        throw std::invalid_argument("dnn: l1 strength must be >= 0");
      if (!(mlp.learning_rate > 0.0))
        throw std::invalid_argument("dnn: learning rate must be > 0");
      if (mlp.epochs < 0) throw std::invalid_argument("dnn: epochs must be >= 0");
      if (mlp.batch_size < 1)
        throw std::invalid_argument("dnn: batch size must be >= 1");
      break;
  }
}

std::string ModelConfig::summary() const {
  switch (kind) {
    case ModelKind::Knn:
      return fmt::format("k={}", knn.k);
    case ModelKind::RandomForest:
      return fmt::format("trees={} depth={} min_leaf={} features={}{}",
                         forest.n_trees, forest.max_depth, forest.min_leaf,
                         forest.feature_subsample,
                         forest.bootstrap ? "" : " no-bootstrap");
    case ModelKind::GradientBoost:
      return fmt::format("stages={} shrinkage={} depth={}", boost.stages,
                         boost.shrinkage, boost.max_depth);
    case ModelKind::XgBoost:
      return fmt::format("stages={} shrinkage={} depth={} gamma={} alpha={}",
                         boost.stages, boost.shrinkage, boost.max_depth,
                         boost.gamma, boost.leaf_l2);
    case ModelKind::Gpr:
      if (gpr.elastic_net)
        return fmt::format("l={} s2={} l1={} l2={}", gpr.length_scale,
                           gpr.signal_var, gpr.en_l1, gpr.en_l2);
      return fmt::format("l={} s2={} noise={}", gpr.length_scale, gpr.signal_var,
                         gpr.noise_var);
    case ModelKind::Dnn:
      return fmt::format("hidden={}-{}-{} l1={} lr={} epochs={}", mlp.hidden[0],
                         mlp.hidden[1], mlp.hidden[2], mlp.l1_hidden3,
                         mlp.learning_rate, mlp.epochs);
  }
  return {};
}

TrainedModel::TrainedModel(ModelConfig config, Scaler scaler, State state,
                           std::vector<double> loss_trace)
    : config_(std::move(config)),
      scaler_(std::move(scaler)),
      state_(std::move(state)),
      loss_trace_(std::move(loss_trace)) {}

Eigen::VectorXd TrainedModel::predict(const Eigen::MatrixXd& X) const {
  if (X.cols() != scaler_.mean.size())
    throw std::invalid_argument(
        fmt::format("predict: expected {} feature columns, got {}",
                    scaler_.mean.size(), X.cols()));
  const Eigen::MatrixXd Xs = scaler_.transform(X);
  return std::visit(
      [&](const auto& state) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, KnnModel>)
          return knn_predict(state, Xs);
        else if constexpr (std::is_same_v<T, ForestModel>)
          return forest_predict(state, Xs);
        else if constexpr (std::is_same_v<T, BoostModel>)
          return boosted_predict(state, Xs);
        else if constexpr (std::is_same_v<T, GprFit>)
          return state.predict_means(Xs);
        else if constexpr (std::is_same_v<T, GprElasticFit>)
          return state.predict_means(Xs);
        else
          return state.net.predict(Xs);
      },
      state_);
}

double TrainedModel::predict_one(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd row(1, x.size());
  row.row(0) = x.transpose();
  return predict(row)(0);
}

std::vector<GprPrediction> TrainedModel::predict_with_variance(
    const Eigen::MatrixXd& X) const {
  const auto* fit = std::get_if<GprFit>(&state_);
  if (fit == nullptr)
    throw std::logic_error(
        "predict_with_variance: only the exact GP regressor provides variances");
  const Eigen::MatrixXd Xs = scaler_.transform(X);
  std::vector<GprPrediction> out;
  out.reserve(static_cast<std::size_t>(Xs.rows()));
  for (Eigen::Index r = 0; r < Xs.rows(); ++r) out.push_back(fit->predict(Xs.row(r)));
  return out;
}

TrainedModel train(const ModelConfig& config, const Dataset& dataset,
                   int n_threads) {
  config.validate();
  dataset.validate();
  if (dataset.rows() < 1) throw std::invalid_argument("train: empty dataset");

  const Scaler scaler = config.standardize_effective()
                            ? Scaler::fit(dataset.X, dataset.feature_names)
                            : Scaler::identity(dataset.cols());
  const Eigen::MatrixXd Xs = scaler.transform(dataset.X);

  switch (config.kind) {
    case ModelKind::Knn: {
      if (config.knn.k > dataset.rows())
        throw std::invalid_argument(
            fmt::format("knn: k={} exceeds {} training rows", config.knn.k,
                        dataset.rows()));
      return TrainedModel(config, scaler, KnnModel{Xs, dataset.y, config.knn.k}, {});
    }
    case ModelKind::RandomForest: {
      ForestModel forest =
          fit_forest(Xs, dataset.y, config.forest, config.seed, n_threads);
      return TrainedModel(config, scaler, std::move(forest), {});
    }
    case ModelKind::GradientBoost: {
      BoostParams params = config.boost;  // plain boosting: no tree penalties
      params.gamma = 0.0;
      params.leaf_l2 = 0.0;
      BoostModel boost = fit_boosted(Xs, dataset.y, params);
      std::vector<double> trace = boost.train_mse;
      return TrainedModel(config, scaler, std::move(boost), std::move(trace));
    }
    case ModelKind::XgBoost: {
      BoostModel boost = fit_boosted(Xs, dataset.y, config.boost);
      std::vector<double> trace = boost.train_mse;
      return TrainedModel(config, scaler, std::move(boost), std::move(trace));
    }
    case ModelKind::Gpr: {
      if (config.gpr.elastic_net) {
        GprElasticFit fit = fit_gpr_elastic(Xs, dataset.y, config.gpr);
        return TrainedModel(config, scaler, std::move(fit), {});
      }
      GprFit fit = fit_gpr(Xs, dataset.y, config.gpr);
      return TrainedModel(config, scaler, std::move(fit), {});
    }
    case ModelKind::Dnn: {
      MlpModel mlp = fit_mlp(Xs, dataset.y, config.mlp, config.seed);
      std::vector<double> trace = mlp.trace;
      return TrainedModel(config, scaler, std::move(mlp), std::move(trace));
    }
  }
  throw std::logic_error("train: unhandled model kind");
}

Eigen::VectorXd predict_batch(const TrainedModel& model, const Eigen::MatrixXd& X) {
  return model.predict(X);
}

}  // namespace firetke::models
