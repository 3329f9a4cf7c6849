#include <cmath>

#include "eegcx/classifiers.hpp"
#include "eegcx/errors.hpp"
#include "eegcx/rng.hpp"

namespace eegcx {

namespace {

constexpr int kEpochs = 500;
constexpr double kLearningRate = 0.3;
constexpr double kMomentum = 0.2;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct WeightView {
  // W1 row-major (hidden x inputs), then b1, w2, b2.
  static size_t w1(const MlpModel& net, size_t h, size_t j) { return h * net.n_inputs + j; }
  static size_t b1(const MlpModel& net, size_t h) { return net.n_hidden * net.n_inputs + h; }
  static size_t w2(const MlpModel& net, size_t h) {
    return net.n_hidden * net.n_inputs + net.n_hidden + h;
  }
  static size_t b2(const MlpModel& net) { return net.n_hidden * net.n_inputs + 2 * net.n_hidden; }
  static size_t count(const MlpModel& net) { return net.n_hidden * net.n_inputs + 2 * net.n_hidden + 1; }
};

void forward_pass(const MlpModel& net, std::span<const double> x, std::vector<double>& hidden,
                  double& output) {
  hidden.resize(net.n_hidden);
  for (size_t h = 0; h < net.n_hidden; ++h) {
    double z = net.weights[WeightView::b1(net, h)];
    for (size_t j = 0; j < net.n_inputs; ++j) {
      z += net.weights[WeightView::w1(net, h, j)] * x[j];
    }
    hidden[h] = sigmoid(z);
  }
  double z = net.weights[WeightView::b2(net)];
  for (size_t h = 0; h < net.n_hidden; ++h) z += net.weights[WeightView::w2(net, h)] * hidden[h];
  output = sigmoid(z);
}

}  // namespace

MlpModel mlp_init(size_t n_inputs, uint64_t seed) {
  if (n_inputs < 1) throw ConfigError("mlp: need at least one input");
  MlpModel net;
  net.n_inputs = n_inputs;
  net.n_hidden = (n_inputs + 2) / 2;  // ceil((k+1)/2)
  net.seed = seed;
  net.weights.resize(WeightView::count(net));
  rng::Engine eng(seed);
  for (auto& w : net.weights) w = eng.uniform(-0.5, 0.5);
  return net;
}

double mlp_forward(const MlpModel& net, std::span<const double> x) {
  std::vector<double> hidden;
  double output = 0.0;
  forward_pass(net, x, hidden, output);
  return output;
}

// Sum of squared errors over the batch.
double mlp_loss(const MlpModel& net, const LabeledDataset& data) {
  double loss = 0.0;
  std::vector<double> hidden;
  for (size_t i = 0; i < data.rows.size(); ++i) {
    double out = 0.0;
    forward_pass(net, data.rows[i], hidden, out);
    const double target = data.labels[i] == ClassLabel::Patient ? 1.0 : 0.0;
    loss += (target - out) * (target - out);
  }
  return loss;
}

std::vector<double> mlp_gradient(const MlpModel& net, const LabeledDataset& data) {
  std::vector<double> grad(net.weights.size(), 0.0);
  std::vector<double> hidden;
  for (size_t i = 0; i < data.rows.size(); ++i) {
    const auto& x = data.rows[i];
    double out = 0.0;
    forward_pass(net, x, hidden, out);
    const double target = data.labels[i] == ClassLabel::Patient ? 1.0 : 0.0;
    const double delta_out = 2.0 * (out - target) * out * (1.0 - out);

    grad[WeightView::b2(net)] += delta_out;
    for (size_t h = 0; h < net.n_hidden; ++h) {
      grad[WeightView::w2(net, h)] += delta_out * hidden[h];
      const double delta_h =
          delta_out * net.weights[WeightView::w2(net, h)] * hidden[h] * (1.0 - hidden[h]);
      grad[WeightView::b1(net, h)] += delta_h;
      for (size_t j = 0; j < net.n_inputs; ++j) {
        grad[WeightView::w1(net, h, j)] += delta_h * x[j];
      }
    }
  }
  return grad;
}

TrainedModel train_mlp(const LabeledDataset& data, uint64_t seed) {
  if (data.rows.empty()) throw TrainingError("train_mlp: empty dataset");
  const size_t k = data.n_cols();

  MlpModel net = mlp_init(k, seed);
  std::vector<double> velocity(net.weights.size(), 0.0);
  for (int epoch = 0; epoch < kEpochs; ++epoch) {
    const auto grad = mlp_gradient(net, data);
    for (size_t w = 0; w < net.weights.size(); ++w) {
      velocity[w] = -kLearningRate * grad[w] + kMomentum * velocity[w];
      net.weights[w] += velocity[w];
    }
  }
  return {ClassifierKind::Mlp, data.feature_names, std::move(net)};
}

}  // namespace eegcx
