#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "firetke/csv.hpp"
#include "firetke/models/model.hpp"

namespace firetke::models {

namespace {

using nlohmann::json;

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                    .get<double>();
  return m;
}

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json to_json(const RegressionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes)
    nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
  return nodes;
}

RegressionTree tree_from_json(const json& nodes) {
  RegressionTree tree;
  tree.nodes.reserve(nodes.size());
  for (const auto& n : nodes)
    tree.nodes.push_back(TreeNode{n[0].get<int>(), n[1].get<double>(),
                                  n[2].get<int>(), n[3].get<int>(),
                                  n[4].get<double>()});
  return tree;
}

json config_to_json(const ModelConfig& c) {
  json j;
  j["kind"] = std::string(kind_name(c.kind));
  j["seed"] = c.seed;
  if (c.standardize.has_value()) j["standardize"] = *c.standardize;
  switch (c.kind) {
    case ModelKind::Knn:
      j["k"] = c.knn.k;
      break;
    case ModelKind::RandomForest:
      j["trees"] = c.forest.n_trees;
      j["max_depth"] = c.forest.max_depth;
      j["min_leaf"] = c.forest.min_leaf;
      j["feature_subsample"] = c.forest.feature_subsample;
      j["bootstrap"] = c.forest.bootstrap;
      break;
    case ModelKind::GradientBoost:
    case ModelKind::XgBoost:
      j["stages"] = c.boost.stages;
      j["shrinkage"] = c.boost.shrinkage;
      j["max_depth"] = c.boost.max_depth;
      j["min_leaf"] = c.boost.min_leaf;
      j["gamma"] = c.boost.gamma;
      j["alpha"] = c.boost.leaf_l2;
      break;
    case ModelKind::Gpr:
      j["length_scale"] = c.gpr.length_scale;
      j["signal_var"] = c.gpr.signal_var;
      j["noise_var"] = c.gpr.noise_var;
      j["center_target"] = c.gpr.center_target;
      j["elastic_net"] = c.gpr.elastic_net;
      j["l1"] = c.gpr.en_l1;
      j["l2"] = c.gpr.en_l2;
      j["max_sweeps"] = c.gpr.en_max_sweeps;
      j["tol"] = c.gpr.en_tol;
      break;
    case ModelKind::Dnn:
      j["hidden"] = c.mlp.hidden;
      j["l1"] = c.mlp.l1_hidden3;
      j["lr"] = c.mlp.learning_rate;
      j["epochs"] = c.mlp.epochs;
      j["batch"] = c.mlp.batch_size;
      break;
  }
  return j;
}

ModelConfig config_from_json(const json& j, ModelConfig base) {
  if (j.contains("kind")) base.kind = kind_from_name(j["kind"].get<std::string>());
  if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("standardize")) base.standardize = j["standardize"].get<bool>();
  switch (base.kind) {
    case ModelKind::Knn:
      if (j.contains("k")) base.knn.k = j["k"].get<int>();
      break;
    case ModelKind::RandomForest:
      if (j.contains("trees")) base.forest.n_trees = j["trees"].get<int>();
      if (j.contains("max_depth")) base.forest.max_depth = j["max_depth"].get<int>();
      if (j.contains("min_leaf")) base.forest.min_leaf = j["min_leaf"].get<int>();
      if (j.contains("feature_subsample"))
        base.forest.feature_subsample = j["feature_subsample"].get<int>();
      if (j.contains("bootstrap")) base.forest.bootstrap = j["bootstrap"].get<bool>();
      break;
    case ModelKind::GradientBoost:
    case ModelKind::XgBoost:
      if (j.contains("stages")) base.boost.stages = j["stages"].get<int>();
      if (j.contains("shrinkage")) base.boost.shrinkage = j["shrinkage"].get<double>();
      if (j.contains("max_depth")) base.boost.max_depth = j["max_depth"].get<int>();
      if (j.contains("min_leaf")) base.boost.min_leaf = j["min_leaf"].get<int>();
      if (j.contains("gamma")) base.boost.gamma = j["gamma"].get<double>();
      if (j.contains("alpha")) base.boost.leaf_l2 = j["alpha"].get<double>();
      break;
    case ModelKind::Gpr:
      if (j.contains("length_scale"))
        base.gpr.length_scale = j["length_scale"].get<double>();
      if (j.contains("signal_var")) base.gpr.signal_var = j["signal_var"].get<double>();
      if (j.contains("noise_var")) base.gpr.noise_var = j["noise_var"].get<double>();
      if (j.contains("center_target"))
        base.gpr.center_target = j["center_target"].get<bool>();
      if (j.contains("elastic_net"))
        base.gpr.elastic_net = j["elastic_net"].get<bool>();
      if (j.contains("l1")) base.gpr.en_l1 = j["l1"].get<double>();
      if (j.contains("l2")) base.gpr.en_l2 = j["l2"].get<double>();
      if (j.contains("max_sweeps")) base.gpr.en_max_sweeps = j["max_sweeps"].get<int>();
      if (j.contains("tol")) base.gpr.en_tol = j["tol"].get<double>();
      break;
    case ModelKind::Dnn:
      if (j.contains("hidden")) {
        const auto arr = j["hidden"];
        if (arr.size() != 3)
          throw std::invalid_argument("dnn config: exactly three hidden layers");
        for (std::size_t i = 0; i < 3; ++i) base.mlp.hidden[i] = arr[i].get<int>();
      }
      if (j.contains("l1")) base.mlp.l1_hidden3 = j["l1"].get<double>();
      if (j.contains("lr")) base.mlp.learning_rate = j["lr"].get<double>();
      if (j.contains("epochs")) base.mlp.epochs = j["epochs"].get<int>();
      if (j.contains("batch")) base.mlp.batch_size = j["batch"].get<int>();
      break;
  }
  return base;
}

json scaler_to_json(const Scaler& s) {
  return json{{"mean", to_json(s.mean)}, {"std", to_json(s.stdev)}};
}

Scaler scaler_from_json(const json& j) {
  Scaler s;
  s.mean = vector_from_json(j["mean"]);
  s.stdev = vector_from_json(j["std"]);
  return s;
}

json state_to_json(const TrainedModel::State& state) {
  json j;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KnnModel>) {
          j["X"] = to_json(s.X);
          j["y"] = to_json(s.y);
          j["k"] = s.k;
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          json trees = json::array();
          for (const auto& tree : s.trees) trees.push_back(to_json(tree));
          j["trees"] = std::move(trees);
        } else if constexpr (std::is_same_v<T, BoostModel>) {
          j["base"] = s.base;
          j["shrinkage"] = s.shrinkage;
          json trees = json::array();
          for (const auto& tree : s.trees) trees.push_back(to_json(tree));
          j["trees"] = std::move(trees);
          j["train_mse"] = s.train_mse;
        } else if constexpr (std::is_same_v<T, GprFit>) {
          j["X"] = to_json(s.X);
          j["L"] = to_json(s.L);
          j["alpha"] = to_json(s.alpha);
          j["y_offset"] = s.y_offset;
          j["jitter"] = s.jitter;
        } else if constexpr (std::is_same_v<T, GprElasticFit>) {
          j["X"] = to_json(s.X);
          j["w"] = to_json(s.w);
          j["y_offset"] = s.y_offset;
          j["sweeps"] = s.sweeps;
        } else {  // MlpModel
          json w = json::array();
          for (const auto& m : s.net.weights) w.push_back(to_json(m));
          json b = json::array();
          for (const auto& v : s.net.biases) b.push_back(to_json(v));
          j["weights"] = std::move(w);
          j["biases"] = std::move(b);
        }
      },
      state);
  return j;
}

TrainedModel::State state_from_json(const json& j, const ModelConfig& config) {
  switch (config.kind) {
    case ModelKind::Knn:
      return KnnModel{matrix_from_json(j["X"]), vector_from_json(j["y"]),
                      j["k"].get<int>()};
    case ModelKind::RandomForest: {
      ForestModel forest;
      forest.params = config.forest;
      for (const auto& tree : j["trees"]) forest.trees.push_back(tree_from_json(tree));
      return forest;
    }
    case ModelKind::GradientBoost:
    case ModelKind::XgBoost: {
      BoostModel boost;
      boost.base = j["base"].get<double>();
      boost.shrinkage = j["shrinkage"].get<double>();
      for (const auto& tree : j["trees"]) boost.trees.push_back(tree_from_json(tree));
      boost.train_mse = j["train_mse"].get<std::vector<double>>();
      return boost;
    }
    case ModelKind::Gpr: {
      if (config.gpr.elastic_net) {
        GprElasticFit fit;
        fit.params = config.gpr;
        fit.X = matrix_from_json(j["X"]);
        fit.w = vector_from_json(j["w"]);
        fit.y_offset = j["y_offset"].get<double>();
        fit.sweeps = j["sweeps"].get<int>();
        return fit;
      }
      GprFit fit;
      fit.params = config.gpr;
      fit.X = matrix_from_json(j["X"]);
      fit.L = matrix_from_json(j["L"]);
      fit.alpha = vector_from_json(j["alpha"]);
      fit.y_offset = j["y_offset"].get<double>();
      fit.jitter = j["jitter"].get<double>();
      return fit;
    }
    case ModelKind::Dnn: {
      MlpModel model;
      model.params = config.mlp;
      for (const auto& m : j["weights"])
        model.net.weights.push_back(matrix_from_json(m));
      for (const auto& v : j["biases"]) model.net.biases.push_back(vector_from_json(v));
      return model;
    }
  }
  throw std::logic_error("state_from_json: unhandled kind");
}

}  // namespace

ModelConfig model_config_from_json_text(std::string_view text, ModelConfig base) {
  return config_from_json(json::parse(text), std::move(base));
}

std::string model_config_to_json_text(const ModelConfig& config) {
  return config_to_json(config).dump();
}

void TrainedModel::save(const std::filesystem::path& path) const {
  json j;
  j["format"] = "firetke-model";
  j["version"] = 1;
  j["kind"] = std::string(kind_name(config_.kind));
  j["config"] = config_to_json(config_);
  j["scaler"] = scaler_to_json(scaler_);
  j["loss_trace"] = loss_trace_;
  j["state"] = state_to_json(state_);
  csv::atomic_write(path, j.dump());
}

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  json j;
  in >> j;
  if (!j.contains("format") || j["format"] != "firetke-model")
    throw std::runtime_error("not a firetke model container: " + path.string());
  if (j["version"].get<int>() != 1)
    throw std::runtime_error(
        fmt::format("unsupported model container version {}", j["version"].dump()));

  TrainedModel model;
  model.config_ = config_from_json(j["config"], ModelConfig{});
  model.scaler_ = scaler_from_json(j["scaler"]);
  model.loss_trace_ = j["loss_trace"].get<std::vector<double>>();
  model.state_ = state_from_json(j["state"], model.config_);
  return model;
}

}  // namespace firetke::models
