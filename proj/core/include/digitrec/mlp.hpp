#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "digitrec/features.hpp"

namespace digitrec {

inline constexpr int kClassCount = 10;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Input -> one sigmoid hidden layer -> sigmoid outputs. Each weight matrix
// has fan-in + 1 columns; the last column is the bias.
struct MlpModel {
  std::array<int, 3> layer_sizes{kFeatureCount, 65, kClassCount};
  Matrix hidden;  // layer_sizes[1] x (layer_sizes[0] + 1)
  Matrix output;  // layer_sizes[2] x (layer_sizes[1] + 1)

  int input_size() const noexcept { return layer_sizes[0]; }
  int hidden_size() const noexcept { return layer_sizes[1]; }
  int output_size() const noexcept { return layer_sizes[2]; }

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

struct TrainingConfig {
  double learning_rate = 0.8;
  double momentum = 0.7;
  int max_epochs = 500;
  std::uint64_t seed = 1;
  int hidden_size = 65;
  // Stop once the epoch SSE has improved by less than stop_tolerance for
  // `patience` consecutive epochs.
  double stop_tolerance = 1e-4;
  int patience = 20;
  int input_size = kFeatureCount;
  int output_size = kClassCount;
};

struct LabeledSample {
  std::vector<double> features;
  int label = 0;
};

LabeledSample make_sample(const FeatureVector& features, int label);

// Weights and biases uniform on [-0.5, 0.5) from Rng(config.seed), hidden
// matrix first, each row-major.
MlpModel init_model(const TrainingConfig& config);

double sigmoid(double x) noexcept;

struct LayerOutputs {
  std::vector<double> hidden;
  std::vector<double> output;
};

LayerOutputs forward_layers(const MlpModel& model, std::span<const double> x);
std::vector<double> forward(const MlpModel& model, std::span<const double> x);

// Index of the largest value; ties go to the lowest index.
int argmax(std::span<const double> values);
int predict(const MlpModel& model, std::span<const double> x);

// Weight-shaped container for dE/dw.
struct Gradient {
  Matrix hidden;
  Matrix output;
};

// E = 1/2 * ||target - output||^2 with a one-hot target.
double sample_error(const MlpModel& model, const LabeledSample& sample);

// Exact analytic dE/dw. Throws Errc::dimension_mismatch or
// Errc::label_out_of_range for samples that do not fit the model.
Gradient gradient(const MlpModel& model, const LabeledSample& sample);

struct TrainResult {
  MlpModel model;
  // Sum over samples of ||target - output||^2, accumulated during each epoch.
  std::vector<double> loss_history;
};

// Online backpropagation with momentum:
//   dw(t) = -learning_rate * dE/dw + momentum * dw(t-1)
// Samples are visited in an order reshuffled every epoch. Stops after
// `patience` epochs without beating the lowest epoch SSE by stop_tolerance
// and returns the weights from the end of that lowest-SSE epoch.
// Deterministic for a given (model, data order, config). Throws Errc::empty_dataset,
// Errc::dimension_mismatch, Errc::label_out_of_range.
TrainResult train(MlpModel model, std::span<const LabeledSample> data, const TrainingConfig& config);

// Little-endian "MLP1" model file; see README for the byte layout.
void save_model(const MlpModel& model, std::ostream& out);
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(std::istream& in);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace digitrec
