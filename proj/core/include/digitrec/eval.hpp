#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "digitrec/mlp.hpp"

namespace digitrec {

struct Dataset {
  std::vector<LabeledSample> samples;
  std::vector<std::string> provenance;  // file path or synthetic tag, parallel to samples

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  void add(LabeledSample sample, std::string source);
  std::array<std::size_t, kClassCount> class_counts() const;
};

// Stratified k-way partition. assignments[i] is the fold of sample i.
struct FoldPlan {
  int fold_count = 0;
  std::vector<int> assignments;

  std::vector<std::size_t> test_indices(int fold) const;
  std::vector<std::size_t> train_indices(int fold) const;
};

// Each class (ascending label) is shuffled with one Rng(seed) and dealt
// round-robin into the folds, continuing where the previous class stopped,
// so per-class and total fold sizes each differ by at most one.
// Throws Errc::invalid_argument for k < 2 and Errc::too_few_samples when a
// present class has fewer than k samples.
FoldPlan make_folds(const Dataset& data, int k, std::uint64_t seed);

// Rows are true labels, columns predictions.
class ConfusionMatrix {
 public:
  long& at(int truth, int predicted) { return counts_.at(truth).at(predicted); }
  long at(int truth, int predicted) const { return counts_.at(truth).at(predicted); }
  long total() const noexcept;
  long trace() const noexcept;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::array<std::array<long, kClassCount>, kClassCount> counts_{};
};

// Throws Errc::length_mismatch or Errc::label_out_of_range.
ConfusionMatrix confusion_matrix(std::span<const int> truths, std::span<const int> predictions);

// One train/test split handed to a FoldEvaluator. config.seed is already the
// per-fold seed (base seed + fold index).
struct FoldTask {
  int fold = 0;
  std::span<const LabeledSample> train;
  std::span<const LabeledSample> test;
  TrainingConfig config;
};

// Returns one predicted label per test sample.
using FoldEvaluator = std::function<std::vector<int>(const FoldTask&)>;

// Default evaluator: init_model + train on the training split, predict the test split.
std::vector<int> train_and_predict(const FoldTask& task);

struct EvaluationReport {
  int fold_count = 0;
  std::vector<double> per_fold_accuracy;  // percent
  double mean_accuracy = 0.0;             // percent, unrounded
  ConfusionMatrix confusion;              // pooled over folds
  std::vector<std::size_t> per_fold_test_size;
  TrainingConfig config;
};

struct CrossValidationOptions {
  int folds = 3;
  // Folds run on separate threads; results are reduced in fold order.
  bool parallel = true;
};

EvaluationReport cross_validate(const Dataset& data, const TrainingConfig& config,
                                const CrossValidationOptions& options = {},
                                const FoldEvaluator& evaluator = train_and_predict);

struct SweepRow {
  int hidden_size = 0;
  std::vector<double> per_fold_accuracy;
  double mean_accuracy = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  int selected_size = 0;
};

// Best mean accuracy as reported (rounded to 2 decimals); ties go to the
// smaller hidden size. Throws Errc::invalid_argument on an empty table.
int select_hidden_size(std::span<const SweepRow> rows);

SweepTable sweep_hidden(const Dataset& data, std::span<const int> sizes, const TrainingConfig& config,
                        const CrossValidationOptions& options = {},
                        const FoldEvaluator& evaluator = train_and_predict);

// Half-up rounding to `decimals` places, tolerant of binary representation
// error (96.665 rounds to 96.67).
double round_half_up(double value, int decimals = 2);
// Fixed two-decimal rendering of round_half_up(value).
std::string format_rate(double percent);

// "fold,accuracy" header, one row per fold (1-based), then "mean,<mean>".
void write_report_csv(const EvaluationReport& report, std::ostream& out);
// "size,fold1,...,foldk,mean", one row per hidden size.
void write_sweep_csv(const SweepTable& table, std::ostream& out);
// Fixed-width text table, rows = true label, columns = predicted label.
void write_confusion_text(const ConfusionMatrix& matrix, std::ostream& out);

// Synthetic stand-in corpus: ten glyph archetypes on 32x32 rasters.
//   0 vertical bar   1 horizontal bar   2 "\" diagonal   3 "/" diagonal
//   4 ring           5 plus sign        6 L shape        7 T shape
//   8 filled disc    9 zig-zag
// Each sample is shifted by a jitter drawn from [-2, 2] on both axes, then
// every pixel flips with probability `noise`.
BinaryImage render_glyph(int label, int row_shift, int col_shift);

struct ToyImage {
  int label = 0;
  BinaryImage image;
  std::string tag;
};

// Draw order: labels ascending, per_class samples each; per sample the row
// shift, column shift, then one uniform per pixel in row-major order.
std::vector<ToyImage> make_toy_images(int per_class, double noise, std::uint64_t seed);

// make_toy_images passed through extract_features.
Dataset make_toy_dataset(int per_class, double noise, std::uint64_t seed);

// Feature dump: header "label,f0,...,f75", one row per sample, values
// printed with 17 significant digits so they parse back exactly.
void write_feature_csv(const Dataset& data, std::ostream& out);
// Throws Errc::malformed_data on malformed rows (the message names `source` and the line).
Dataset read_feature_csv(std::istream& in, const std::string& source);

}  // namespace digitrec
