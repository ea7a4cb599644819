#include "digitrec/mlp.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "digitrec/errors.hpp"
#include "digitrec/random.hpp"

namespace digitrec {

namespace {

// Second stream so shuffling does not replay the initialization draws.
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

void check_sample(const MlpModel& model, const LabeledSample& sample) {
  if (static_cast<int>(sample.features.size()) != model.input_size()) {
    throw Error(Errc::dimension_mismatch, "feature length " + std::to_string(sample.features.size()) +
                                              " != model input " + std::to_string(model.input_size()));
  }
  if (sample.label < 0 || sample.label >= model.output_size()) {
    throw Error(Errc::label_out_of_range, "label " + std::to_string(sample.label));
  }
}

void check_input(const MlpModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.input_size()) {
    throw Error(Errc::dimension_mismatch, "input length " + std::to_string(x.size()) +
                                              " != model input " + std::to_string(model.input_size()));
  }
}

// out[j] = sigmoid(W[j, :n] . in + W[j, n])
void affine_sigmoid(const Matrix& w, std::span<const double> in, std::vector<double>& out) {
  const int n = static_cast<int>(in.size());
  out.resize(static_cast<std::size_t>(w.rows()));
  for (int j = 0; j < w.rows(); ++j) {
    double z = w(j, n);
    for (int i = 0; i < n; ++i) z += w(j, i) * in[i];
    out[j] = sigmoid(z);
  }
}

// Backpropagated deltas for E = 1/2 ||t - o||^2 given a forward pass.
struct Deltas {
  std::vector<double> output;
  std::vector<double> hidden;
};

Deltas backprop(const MlpModel& model, const LayerOutputs& act, int label) {
  Deltas d;
  d.output.resize(act.output.size());
  for (std::size_t k = 0; k < act.output.size(); ++k) {
    const double o = act.output[k];
    const double target = static_cast<int>(k) == label ? 1.0 : 0.0;
    d.output[k] = (o - target) * o * (1.0 - o);
  }
  d.hidden.resize(act.hidden.size());
  for (int j = 0; j < model.hidden_size(); ++j) {
    double back = 0.0;
    for (int k = 0; k < model.output_size(); ++k) back += model.output(k, j) * d.output[k];
    const double h = act.hidden[j];
    d.hidden[j] = back * h * (1.0 - h);
  }
  return d;
}

double squared_error(const std::vector<double>& output, int label) {
  double sum = 0.0;
  for (std::size_t k = 0; k < output.size(); ++k) {
    const double diff = (static_cast<int>(k) == label ? 1.0 : 0.0) - output[k];
    sum += diff * diff;
  }
  return sum;
}

}  // namespace

LabeledSample make_sample(const FeatureVector& features, int label) {
  return LabeledSample{std::vector<double>(features.begin(), features.end()), label};
}

MlpModel init_model(const TrainingConfig& config) {
  if (config.hidden_size < 1 || config.input_size < 1 || config.output_size < 1) {
    throw Error(Errc::invalid_argument, "layer sizes must be positive");
  }
  MlpModel model;
  model.layer_sizes = {config.input_size, config.hidden_size, config.output_size};
  model.hidden = Matrix(config.hidden_size, config.input_size + 1);
  model.output = Matrix(config.output_size, config.hidden_size + 1);
  Rng rng(config.seed);
  for (double& w : model.hidden.data()) w = rng.uniform(-0.5, 0.5);
  for (double& w : model.output.data()) w = rng.uniform(-0.5, 0.5);
  return model;
}

double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

LayerOutputs forward_layers(const MlpModel& model, std::span<const double> x) {
  check_input(model, x);
  LayerOutputs act;
  affine_sigmoid(model.hidden, x, act.hidden);
  affine_sigmoid(model.output, act.hidden, act.output);
  return act;
}

std::vector<double> forward(const MlpModel& model, std::span<const double> x) {
  return forward_layers(model, x).output;
}

int argmax(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

int predict(const MlpModel& model, std::span<const double> x) { return argmax(forward(model, x)); }

double sample_error(const MlpModel& model, const LabeledSample& sample) {
  check_sample(model, sample);
  return 0.5 * squared_error(forward(model, sample.features), sample.label);
}

Gradient gradient(const MlpModel& model, const LabeledSample& sample) {
  check_sample(model, sample);
  const LayerOutputs act = forward_layers(model, sample.features);
  const Deltas d = backprop(model, act, sample.label);

  const int n_in = model.input_size();
  const int n_hidden = model.hidden_size();
  Gradient g{Matrix(model.hidden.rows(), model.hidden.cols()),
             Matrix(model.output.rows(), model.output.cols())};
  for (int k = 0; k < model.output_size(); ++k) {
    for (int j = 0; j < n_hidden; ++j) g.output(k, j) = d.output[k] * act.hidden[j];
    g.output(k, n_hidden) = d.output[k];
  }
  for (int j = 0; j < n_hidden; ++j) {
    for (int i = 0; i < n_in; ++i) g.hidden(j, i) = d.hidden[j] * sample.features[i];
    g.hidden(j, n_in) = d.hidden[j];
  }
  return g;
}

TrainResult train(MlpModel model, std::span<const LabeledSample> data, const TrainingConfig& config) {
  if (config.learning_rate < 0.0 || config.momentum < 0.0 || config.momentum >= 1.0 ||
      config.max_epochs < 0 || config.patience < 1 || config.stop_tolerance < 0.0) {
    throw Error(Errc::invalid_argument, "training configuration out of range");
  }
  if (data.empty()) throw Error(Errc::empty_dataset, "no training samples");
  for (const LabeledSample& s : data) check_sample(model, s);

  Rng rng(config.seed ^ kShuffleStream);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Matrix step_hidden(model.hidden.rows(), model.hidden.cols());
  Matrix step_output(model.output.rows(), model.output.cols());
  const int n_in = model.input_size();
  const int n_hidden = model.hidden_size();
  const double eta = config.learning_rate;
  const double alpha = config.momentum;

  TrainResult result;
  result.model = model;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double sse = 0.0;
    for (std::size_t idx : order) {
      const LabeledSample& s = data[idx];
      const LayerOutputs act = forward_layers(model, s.features);
      sse += squared_error(act.output, s.label);
      const Deltas d = backprop(model, act, s.label);

      for (int k = 0; k < model.output_size(); ++k) {
        for (int j = 0; j <= n_hidden; ++j) {
          const double grad = d.output[k] * (j < n_hidden ? act.hidden[j] : 1.0);
          double& step = step_output(k, j);
          step = -eta * grad + alpha * step;
          model.output(k, j) += step;
        }
      }
      for (int j = 0; j < n_hidden; ++j) {
        for (int i = 0; i <= n_in; ++i) {
          const double grad = d.hidden[j] * (i < n_in ? s.features[i] : 1.0);
          double& step = step_hidden(j, i);
          step = -eta * grad + alpha * step;
          model.hidden(j, i) += step;
        }
      }
    }
    if (!result.loss_history.empty()) {
      stalled = best - sse < config.stop_tolerance ? stalled + 1 : 0;
    }
    result.loss_history.push_back(sse);
    if (sse < best) {
      best = sse;
      result.model = model;
    }
    if (stalled >= config.patience) break;
  }
  return result;
}

}  // namespace digitrec
