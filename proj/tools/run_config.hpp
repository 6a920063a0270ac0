#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "firetke/evaluate.hpp"
#include "firetke/models/model.hpp"
#include "firetke/synth.hpp"
#include "firetke/turbulence.hpp"

namespace firetke::cli {

/// One declarative run description (JSON file) plus flag overrides; flags
/// win over file values. See the README for the documented schema.
struct RunConfig {
  std::filesystem::path sonic;
  std::filesystem::path thermo;
  bool epoch_time = false;  ///< timestamps are absolute; rebase to relative
  double align_tolerance = 0.05;
  std::optional<double> burn_start;
  std::optional<double> burn_end;
  double clip = 50.0;
  turbulence::ClipTarget clip_target = turbulence::ClipTarget::Wind;
  int window = 10;
  TargetKind target = TargetKind::TkeMa;
  evaluate::SplitSpec split;
  std::vector<models::ModelKind> model_kinds;
  std::map<models::ModelKind, std::vector<models::ModelConfig>> grids;
  std::filesystem::path out = "out";
  std::uint64_t seed = 42;
  int threads = 0;  ///< 0 = hardware concurrency
  std::string dataset_label;
  synth::SynthSpec synth_spec;
};

/// Flag overrides shared by the subcommands; unset fields leave the file
/// values alone.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> target;
  std::optional<double> clip;
  std::optional<int> window;
  std::optional<std::string> split;
  std::optional<int> threads;
};

RunConfig load_run_config(const std::filesystem::path& path);
void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Checks the fields a data-pipeline command needs: input files present,
/// burn window ordered, numeric knobs in range.
void validate_for_pipeline(const RunConfig& config);

int effective_threads(const RunConfig& config);

}  // namespace firetke::cli
