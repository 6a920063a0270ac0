#include "firetke/models/mlp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "firetke/rng.hpp"

namespace firetke::models {

namespace {

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Forward {
  // activations[0] is the input (features x batch); sized layers+1
  std::vector<Eigen::MatrixXd> z;  // pre-activations per layer
  std::vector<Eigen::MatrixXd> a;  // activations per layer
};

Forward run_forward(const MlpNetwork& net, const Eigen::MatrixXd& X) {
  Forward f;
  const std::size_t layers = net.weights.size();
  f.z.resize(layers);
  f.a.resize(layers + 1);
  f.a[0] = X.transpose();
  for (std::size_t l = 0; l < layers; ++l) {
    f.z[l] = (net.weights[l] * f.a[l]).colwise() + net.biases[l];
    if (l + 1 < layers)
      f.a[l + 1] = f.z[l].unaryExpr([](double v) { return softplus(v); });
    else
      f.a[l + 1] = f.z[l];  // linear output
  }
  return f;
}

}  // namespace

MlpNetwork::MlpNetwork(Eigen::Index input_dim, const std::array<int, 3>& hidden,
                       std::uint64_t seed) {
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("MlpNetwork: hidden sizes must be >= 1");
  if (input_dim < 1) throw std::invalid_argument("MlpNetwork: input_dim must be >= 1");

  std::vector<Eigen::Index> dims{input_dim, hidden[0], hidden[1], hidden[2], 1};
  Rng rng(seed);
  weights.resize(4);
  biases.resize(4);
  for (std::size_t l = 0; l < 4; ++l) {
    const Eigen::Index fan_in = dims[l];
    const Eigen::Index fan_out = dims[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    weights[l].resize(fan_out, fan_in);
    for (Eigen::Index i = 0; i < fan_out; ++i)
      for (Eigen::Index j = 0; j < fan_in; ++j)
        weights[l](i, j) = rng.uniform(-limit, limit);
    biases[l] = Eigen::VectorXd::Zero(fan_out);
  }
}

Eigen::VectorXd MlpNetwork::predict(const Eigen::MatrixXd& X) const {
  if (X.cols() != weights[0].cols())
    throw std::invalid_argument("MlpNetwork::predict: feature count mismatch");
  return run_forward(*this, X).a.back().transpose();
}

double MlpNetwork::loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        double l1_hidden3) const {
  const Eigen::VectorXd pred = predict(X);
  const double data_term =
      (pred - y).squaredNorm() / static_cast<double>(X.rows());
  return data_term + l1_hidden3 * weights[2].cwiseAbs().sum();
}

MlpNetwork::Gradients MlpNetwork::gradients(const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& y,
                                            double l1_hidden3) const {
  const Forward f = run_forward(*this, X);
  const double inv_n = 1.0 / static_cast<double>(X.rows());

  Gradients g;
  g.w.resize(4);
  g.b.resize(4);

  // delta for the linear output layer
  Eigen::MatrixXd delta =
      2.0 * inv_n * (f.a[4] - y.transpose());  // 1 x batch
  for (int l = 3; l >= 0; --l) {
    g.w[static_cast<std::size_t>(l)] = delta * f.a[static_cast<std::size_t>(l)].transpose();
    g.b[static_cast<std::size_t>(l)] = delta.rowwise().sum();
    if (l > 0) {
      delta = (weights[static_cast<std::size_t>(l)].transpose() * delta)
                  .cwiseProduct(f.z[static_cast<std::size_t>(l) - 1].unaryExpr(
                      [](double v) { return sigmoid(v); }));
    }
  }
  // subgradient of the lasso term on the third hidden layer's weights
  if (l1_hidden3 != 0.0)
    g.w[2] += l1_hidden3 * weights[2].unaryExpr([](double v) {
      return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    });
  return g;
}

MlpModel fit_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const MlpParams& params, std::uint64_t seed) {
  if (X.rows() != y.size())
    throw std::invalid_argument("fit_mlp: X and y row counts differ");
  if (X.rows() < 1) throw std::invalid_argument("fit_mlp: empty training set");
  if (params.l1_hidden3 < 0.0)
    throw std::invalid_argument("fit_mlp: l1 strength must be >= 0");
  if (!(params.learning_rate > 0.0))
    throw std::invalid_argument("fit_mlp: learning rate must be > 0");
  if (params.epochs < 0) throw std::invalid_argument("fit_mlp: epochs must be >= 0");
  if (params.batch_size < 1)
    throw std::invalid_argument("fit_mlp: batch size must be >= 1");

  MlpModel model;
  model.params = params;
  model.net = MlpNetwork(X.cols(), params.hidden, derive_seed(seed, 0));

  // adaptive moment state per tensor
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  std::vector<Eigen::MatrixXd> mw(4), vw(4);
  std::vector<Eigen::VectorXd> mb(4), vb(4);
  for (std::size_t l = 0; l < 4; ++l) {
    mw[l] = Eigen::MatrixXd::Zero(model.net.weights[l].rows(),
                                  model.net.weights[l].cols());
    vw[l] = mw[l];
    mb[l] = Eigen::VectorXd::Zero(model.net.biases[l].size());
    vb[l] = mb[l];
  }

  Rng shuffle_rng(derive_seed(seed, 1));
  const Eigen::Index n = X.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  long step = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (Eigen::Index start = 0; start < n; start += params.batch_size) {
      const Eigen::Index size = std::min<Eigen::Index>(params.batch_size, n - start);
      Eigen::MatrixXd xb(size, X.cols());
      Eigen::VectorXd yb(size);
      for (Eigen::Index i = 0; i < size; ++i) {
        xb.row(i) = X.row(order[static_cast<std::size_t>(start + i)]);
        yb(i) = y(order[static_cast<std::size_t>(start + i)]);
      }
      const auto grads = model.net.gradients(xb, yb, params.l1_hidden3);
      ++step;
      const double corr1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double corr2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t l = 0; l < 4; ++l) {
        mw[l] = kBeta1 * mw[l] + (1.0 - kBeta1) * grads.w[l];
        vw[l] = kBeta2 * vw[l].array() + (1.0 - kBeta2) * grads.w[l].array().square();
        model.net.weights[l].array() -=
            params.learning_rate * (mw[l].array() / corr1) /
            ((vw[l].array() / corr2).sqrt() + kEps);
        mb[l] = kBeta1 * mb[l] + (1.0 - kBeta1) * grads.b[l];
        vb[l] = kBeta2 * vb[l].array() + (1.0 - kBeta2) * grads.b[l].array().square();
        model.net.biases[l].array() -=
            params.learning_rate * (mb[l].array() / corr1) /
            ((vb[l].array() / corr2).sqrt() + kEps);
      }
    }
    const double epoch_loss = model.net.loss(X, y, params.l1_hidden3);
    if (!std::isfinite(epoch_loss))
      throw std::runtime_error(fmt::format(
          "fit_mlp: training diverged at epoch {} (objective is not finite); "
          "reduce the learning rate",
          epoch + 1));
    model.trace.push_back(epoch_loss);
  }
  return model;
}

}  // namespace firetke::models
