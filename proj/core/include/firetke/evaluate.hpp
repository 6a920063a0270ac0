#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firetke/dataset.hpp"
#include "firetke/models/model.hpp"
#include "firetke/stats.hpp"

namespace firetke::evaluate {

enum class SplitStrategy { Random, Chronological };

std::string_view strategy_name(SplitStrategy strategy);  // "random" | "chrono"
SplitStrategy strategy_from_name(std::string_view name);

struct SplitSpec {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;
  SplitStrategy strategy = SplitStrategy::Random;
  std::uint64_t seed = 42;

  void validate() const;  ///< fractions positive, summing to 1 within 1e-9
};

struct SplitIndices {
  std::vector<Eigen::Index> train, val, test;
};

/// Partitions 0..n-1 into disjoint covering index sets. Sizes follow a
/// floor-then-distribute rule: each split gets floor(n * fraction) rows and
/// the remainder goes one row at a time to train, then val, then test.
/// Random strategy shuffles with the seed; chronological keeps row order
/// with train earliest. Throws if any split would get fewer than 2 rows.
SplitIndices split_indices(Eigen::Index n, const SplitSpec& spec);

Dataset take_rows(const Dataset& dataset, std::span<const Eigen::Index> rows);

struct SplitDatasets {
  Dataset train, val, test;
};

SplitDatasets split(const Dataset& dataset, const SplitSpec& spec);

/// Row concatenation. Feature schemas must match; each row keeps (or gains)
/// a provenance tag naming the dataset it came from.
Dataset combine_datasets(const Dataset& a, const Dataset& b);

struct GridCell {
  models::ModelConfig config;
  bool ok = false;
  std::string error;
  double val_r2 = 0.0;
};

struct GridSearchResult {
  models::ModelConfig best;
  std::vector<GridCell> cells;
};

/// Fits every cell on the training split and scores validation R-squared.
/// The argmax wins; ties keep the earliest cell. A cell failing to train is
/// recorded, not fatal, unless every cell fails.
GridSearchResult grid_search(const Dataset& train, const Dataset& val,
                             std::span<const models::ModelConfig> grid,
                             int n_threads = 1);

/// Default hyperparameter grids per model kind.
std::vector<models::ModelConfig> default_grid(models::ModelKind kind,
                                              std::uint64_t seed);

struct ModelEvaluation {
  models::ModelKind kind = models::ModelKind::Knn;
  bool ok = false;
  std::string error;

  models::ModelConfig best_config;
  std::vector<GridCell> grid;
  double val_r2 = 0.0, val_mse = 0.0, val_mae = 0.0;
  double test_r2 = 0.0, test_mse = 0.0, test_mae = 0.0;
  stats::KdeEstimate residual_kde;   ///< test residuals
  std::vector<double> loss_trace;
  Eigen::VectorXd test_pred;
  double runtime_seconds = 0.0;
};

struct EvaluationReport {
  std::string dataset_label;
  std::string target_name;
  SplitSpec split;
  Eigen::Index n_train = 0, n_val = 0, n_test = 0;
  std::vector<ModelEvaluation> models;
  std::vector<std::string> notes;
  Eigen::VectorXd test_actual;
};

/// Grid-search, refit, and score every requested model kind. One model
/// failing is recorded in its cell and never suppresses the others.
EvaluationReport compare_models(
    const Dataset& dataset, const SplitSpec& spec,
    std::span<const models::ModelKind> kinds,
    const std::map<models::ModelKind, std::vector<models::ModelConfig>>& grids,
    std::uint64_t seed, int n_threads = 1);

/// Published reference R-squared (%) for the SLEF Burn20 truss datasets
/// (labels B1..B4, C1..C4, B1C1..B4C4). Annotation only; never a pass/fail
/// target, because the original split rule is not recoverable.
std::optional<double> reference_r2(std::string_view dataset_label,
                                   models::ModelKind kind, bool test_split);

/// Writes the report bundle into a directory: one CSV per metric, loss
/// traces, residual KDE curves, SVG plots, and a human-readable summary.
/// Everything except summary.txt (which includes wall-clock timings) is
/// byte-deterministic for a fixed seed.
void write_report(const EvaluationReport& report,
                  const std::filesystem::path& out_dir);

}  // namespace firetke::evaluate
