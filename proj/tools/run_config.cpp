#include "run_config.hpp"

#include <fstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "firetke/rng.hpp"

namespace firetke::cli {

namespace {

using nlohmann::json;

turbulence::ClipTarget clip_target_from_name(const std::string& name) {
  if (name == "wind") return turbulence::ClipTarget::Wind;
  if (name == "sonic_T") return turbulence::ClipTarget::SonicTemp;
  if (name == "both") return turbulence::ClipTarget::Both;
  throw std::invalid_argument(
      fmt::format("config: unknown clip_target \"{}\" (wind | sonic_T | both)", name));
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(
        fmt::format("config {} is not valid JSON: {}", path.string(), e.what()));
  }

  RunConfig config;
  if (j.contains("sonic")) config.sonic = j["sonic"].get<std::string>();
  if (j.contains("thermo")) config.thermo = j["thermo"].get<std::string>();
  if (j.contains("time_origin")) {
    const auto origin = j["time_origin"].get<std::string>();
    if (origin == "epoch")
      config.epoch_time = true;
    else if (origin == "relative")
      config.epoch_time = false;
    else
      throw std::invalid_argument(
          fmt::format("config: unknown time_origin \"{}\"", origin));
  }
  if (j.contains("align_tolerance"))
    config.align_tolerance = j["align_tolerance"].get<double>();
  if (j.contains("burn_start")) config.burn_start = j["burn_start"].get<double>();
  if (j.contains("burn_end")) config.burn_end = j["burn_end"].get<double>();
  if (j.contains("clip")) config.clip = j["clip"].get<double>();
  if (j.contains("clip_target"))
    config.clip_target = clip_target_from_name(j["clip_target"].get<std::string>());
  if (j.contains("window")) config.window = j["window"].get<int>();
  if (j.contains("target"))
    config.target = target_from_name(j["target"].get<std::string>());
  if (j.contains("split")) {
    const auto& s = j["split"];
    if (s.contains("train")) config.split.train = s["train"].get<double>();
    if (s.contains("val")) config.split.val = s["val"].get<double>();
    if (s.contains("test")) config.split.test = s["test"].get<double>();
    if (s.contains("strategy"))
      config.split.strategy =
          evaluate::strategy_from_name(s["strategy"].get<std::string>());
    if (s.contains("seed")) config.split.seed = s["seed"].get<std::uint64_t>();
  }
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) config.out = j["out"].get<std::string>();
  if (j.contains("threads")) config.threads = j["threads"].get<int>();
  if (j.contains("dataset_label"))
    config.dataset_label = j["dataset_label"].get<std::string>();

  if (j.contains("models")) {
    for (const auto& name : j["models"])
      config.model_kinds.push_back(models::kind_from_name(name.get<std::string>()));
  }
  if (j.contains("grids")) {
    for (const auto& [kind_name, cells] : j["grids"].items()) {
      const models::ModelKind kind = models::kind_from_name(kind_name);
      std::vector<models::ModelConfig> grid;
      for (const auto& cell : cells) {
        models::ModelConfig base;
        base.kind = kind;
        base.seed = config.seed;
        grid.push_back(models::model_config_from_json_text(cell.dump(), base));
        if (grid.back().kind != kind)
          throw std::invalid_argument(
              fmt::format("config: grid entry under \"{}\" changes its kind",
                          kind_name));
      }
      config.grids[kind] = std::move(grid);
    }
  }

  if (j.contains("synth")) {
    const auto& s = j["synth"];
    if (s.contains("n")) config.synth_spec.n = s["n"].get<int>();
    if (s.contains("noise_sd"))
      config.synth_spec.noise_sd = s["noise_sd"].get<double>();
    if (s.contains("noise_frac") && !s["noise_frac"].is_null())
      config.synth_spec.noise_frac = s["noise_frac"].get<double>();
    if (s.contains("kind"))
      config.synth_spec.kind =
          synth::dependence_from_name(s["kind"].get<std::string>());
  }
  config.synth_spec.seed = config.seed;

  if (config.model_kinds.empty())
    config.model_kinds = {models::ModelKind::Dnn,  models::ModelKind::RandomForest,
                          models::ModelKind::Knn,  models::ModelKind::GradientBoost,
                          models::ModelKind::Gpr,  models::ModelKind::XgBoost};
  return config;
}

void apply_overrides(RunConfig& config, const Overrides& overrides) {
  if (overrides.seed) {
    config.seed = *overrides.seed;
    config.synth_spec.seed = *overrides.seed;
  }
  if (overrides.out) config.out = *overrides.out;
  if (overrides.target) config.target = target_from_name(*overrides.target);
  if (overrides.clip) config.clip = *overrides.clip;
  if (overrides.window) config.window = *overrides.window;
  if (overrides.split)
    config.split.strategy = evaluate::strategy_from_name(*overrides.split);
  if (overrides.threads) config.threads = *overrides.threads;
}

void validate_for_pipeline(const RunConfig& config) {
  if (config.sonic.empty() || config.thermo.empty())
    throw std::invalid_argument("config: sonic and thermo file paths are required");
  if (!std::filesystem::exists(config.sonic))
    throw std::runtime_error("sonic file not found: " + config.sonic.string());
  if (!std::filesystem::exists(config.thermo))
    throw std::runtime_error("thermo file not found: " + config.thermo.string());
  if (!config.burn_start || !config.burn_end)
    throw std::invalid_argument("config: burn_start and burn_end are required");
  if (!(*config.burn_start < *config.burn_end))
    throw std::invalid_argument("config: burn_start must be < burn_end");
  if (config.align_tolerance < 0.0)
    throw std::invalid_argument("config: align_tolerance must be >= 0");
  if (!(config.clip > 0.0))
    throw std::invalid_argument("config: clip must be > 0");
  if (config.window < 1)
    throw std::invalid_argument("config: window must be >= 1");
  config.split.validate();
}

int effective_threads(const RunConfig& config) {
  if (config.threads > 0) return config.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace firetke::cli
