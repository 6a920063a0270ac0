#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace firetke::models {

struct MlpParams {
  std::array<int, 3> hidden{64, 32, 16};  ///< three hidden layers, fixed arity
  double l1_hidden3 = 0.0;  ///< lasso strength on the third hidden layer's weights
  double learning_rate = 1e-3;
  int epochs = 200;
  int batch_size = 32;
};

/// Feed-forward regressor: input, three softplus hidden layers, linear
/// output. Weights and biases are public so gradient checks can perturb
/// them directly. weights[i] maps layer i activations to layer i+1
/// pre-activations; weights[2] is the tensor the L1 penalty targets.
class MlpNetwork {
 public:
  MlpNetwork() = default;
  MlpNetwork(Eigen::Index input_dim, const std::array<int, 3>& hidden,
             std::uint64_t seed);

  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;

  /// Mean squared error over the rows of X plus l1 * |W3|_1.
  double loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              double l1_hidden3) const;

  struct Gradients {
    std::vector<Eigen::MatrixXd> w;
    std::vector<Eigen::VectorXd> b;
  };
  Gradients gradients(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      double l1_hidden3) const;

  std::vector<Eigen::MatrixXd> weights;  // 4 tensors
  std::vector<Eigen::VectorXd> biases;   // 4 tensors
};

struct MlpModel {
  MlpNetwork net;
  MlpParams params;
  std::vector<double> trace;  ///< full-set objective after each epoch
};

/// Mini-batch training with adaptive moment estimation. Batches are
/// reshuffled every epoch from the seed; a non-finite objective aborts with
/// a diagnostic rather than returning garbage.
MlpModel fit_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const MlpParams& params, std::uint64_t seed);

}  // namespace firetke::models
