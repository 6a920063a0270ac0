#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "firetke/dataset.hpp"
#include "firetke/models/boosting.hpp"
#include "firetke/models/forest.hpp"
#include "firetke/models/gpr.hpp"
#include "firetke/models/knn.hpp"
#include "firetke/models/mlp.hpp"

namespace firetke::models {

enum class ModelKind { Dnn, RandomForest, Knn, GradientBoost, Gpr, XgBoost };

inline constexpr std::array<ModelKind, 6> kAllKinds = {
    ModelKind::Dnn,    ModelKind::RandomForest, ModelKind::Knn,
    ModelKind::GradientBoost, ModelKind::Gpr,   ModelKind::XgBoost};

std::string_view kind_name(ModelKind kind);          // "dnn" "rf" "knn" "gb" "gpr" "xgb"
std::string_view kind_display_name(ModelKind kind);  // "DNN" "RFR" "KNN" "GBR" "GPR" "XGB"
ModelKind kind_from_name(std::string_view name);

struct KnnParams {
  int k = 5;
};

/// Everything needed to reproduce one trained model: the kind selects which
/// parameter block applies. Feature standardization defaults on for the
/// distance/kernel/gradient models (KNN, GPR, DNN) and off for the trees,
/// which are split-invariant.
struct ModelConfig {
  ModelKind kind = ModelKind::Knn;
  std::uint64_t seed = 42;
  std::optional<bool> standardize;

  KnnParams knn;
  ForestParams forest;
  BoostParams boost;
  GprParams gpr;
  MlpParams mlp;

  bool standardize_effective() const;
  void validate() const;
  /// Short hyperparameter description for report rows.
  std::string summary() const;
};

class TrainedModel {
 public:
  using State = std::variant<KnnModel, ForestModel, BoostModel, GprFit,
                             GprElasticFit, MlpModel>;

  TrainedModel() = default;
  TrainedModel(ModelConfig config, Scaler scaler, State state,
               std::vector<double> loss_trace);

  /// Applies the stored scaler and predicts one value per row.
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
  double predict_one(const Eigen::VectorXd& x) const;

  /// Posterior mean and clamped variance; only the exact GP supports this.
  std::vector<GprPrediction> predict_with_variance(const Eigen::MatrixXd& X) const;

  ModelKind kind() const { return config_.kind; }
  const ModelConfig& config() const { return config_; }
  const Scaler& scaler() const { return scaler_; }
  const State& state() const { return state_; }
  const std::vector<double>& loss_trace() const { return loss_trace_; }

  /// Versioned JSON container; a load reproduces bit-identical predictions.
  void save(const std::filesystem::path& path) const;
  static TrainedModel load(const std::filesystem::path& path);

 private:
  ModelConfig config_;
  Scaler scaler_;
  State state_;
  std::vector<double> loss_trace_;
};

/// Fits the configured model on the dataset. n_threads only distributes
/// independent units (forest trees); results are identical for any count.
TrainedModel train(const ModelConfig& config, const Dataset& train,
                   int n_threads = 1);

Eigen::VectorXd predict_batch(const TrainedModel& model, const Eigen::MatrixXd& X);

/// JSON text <-> config conversion, used by the run-configuration file and
/// the model container. Parsing overlays the fields present in `text` onto
/// `base`, so partial hyperparameter objects work.
ModelConfig model_config_from_json_text(std::string_view text, ModelConfig base);
std::string model_config_to_json_text(const ModelConfig& config);

}  // namespace firetke::models
