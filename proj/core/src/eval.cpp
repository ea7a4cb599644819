#include "digitrec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <iomanip>
#include <ostream>

#include "digitrec/errors.hpp"
#include "digitrec/random.hpp"

namespace digitrec {

void Dataset::add(LabeledSample sample, std::string source) {
  samples.push_back(std::move(sample));
  provenance.push_back(std::move(source));
}

std::array<std::size_t, kClassCount> Dataset::class_counts() const {
  std::array<std::size_t, kClassCount> counts{};
  for (const LabeledSample& s : samples) {
    if (s.label < 0 || s.label >= kClassCount) {
      throw Error(Errc::label_out_of_range, "label " + std::to_string(s.label));
    }
    ++counts[s.label];
  }
  return counts;
}

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_folds(const Dataset& data, int k, std::uint64_t seed) {
  if (k < 2) throw Error(Errc::invalid_argument, "fold count must be at least 2");
  const auto counts = data.class_counts();
  for (int label = 0; label < kClassCount; ++label) {
    if (counts[label] > 0 && counts[label] < static_cast<std::size_t>(k)) {
      throw Error(Errc::too_few_samples, "class " + std::to_string(label) + " has " +
                                             std::to_string(counts[label]) + " samples, need " +
                                             std::to_string(k));
    }
  }

  FoldPlan plan{k, std::vector<int>(data.size(), 0)};
  Rng rng(seed);
  std::size_t dealt = 0;
  for (int label = 0; label < kClassCount; ++label) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.samples[i].label == label) members.push_back(i);
    }
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t idx : members) plan.assignments[idx] = static_cast<int>(dealt++ % k);
  }
  return plan;
}

long ConfusionMatrix::total() const noexcept {
  long sum = 0;
  for (const auto& row : counts_) {
    for (long v : row) sum += v;
  }
  return sum;
}

long ConfusionMatrix::trace() const noexcept {
  long sum = 0;
  for (int i = 0; i < kClassCount; ++i) sum += counts_[i][i];
  return sum;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (int i = 0; i < kClassCount; ++i) {
    for (int j = 0; j < kClassCount; ++j) counts_[i][j] += other.counts_[i][j];
  }
  return *this;
}

ConfusionMatrix confusion_matrix(std::span<const int> truths, std::span<const int> predictions) {
  if (truths.size() != predictions.size()) {
    throw Error(Errc::length_mismatch, std::to_string(truths.size()) + " labels vs " +
                                           std::to_string(predictions.size()) + " predictions");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const int t = truths[i];
    const int p = predictions[i];
    if (t < 0 || t >= kClassCount || p < 0 || p >= kClassCount) {
      throw Error(Errc::label_out_of_range, "label pair (" + std::to_string(t) + ", " +
                                                std::to_string(p) + ") at index " + std::to_string(i));
    }
    ++m.at(t, p);
  }
  return m;
}

std::vector<int> train_and_predict(const FoldTask& task) {
  const MlpModel model = train(init_model(task.config), task.train, task.config).model;
  std::vector<int> predictions;
  predictions.reserve(task.test.size());
  for (const LabeledSample& s : task.test) predictions.push_back(predict(model, s.features));
  return predictions;
}

EvaluationReport cross_validate(const Dataset& data, const TrainingConfig& config,
                                const CrossValidationOptions& options, const FoldEvaluator& evaluator) {
  const FoldPlan plan = make_folds(data, options.folds, config.seed);
  const int k = plan.fold_count;

  struct Split {
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> test;
    std::vector<int> truths;
  };
  std::vector<Split> splits(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int f = 0; f < k; ++f) {
      if (plan.assignments[i] == f) {
        splits[f].test.push_back(data.samples[i]);
        splits[f].truths.push_back(data.samples[i].label);
      } else {
        splits[f].train.push_back(data.samples[i]);
      }
    }
  }

  auto run_fold = [&](int f) {
    TrainingConfig fold_config = config;
    fold_config.seed = config.seed + static_cast<std::uint64_t>(f);
    return evaluator(FoldTask{f, splits[f].train, splits[f].test, fold_config});
  };

  std::vector<std::vector<int>> predictions(static_cast<std::size_t>(k));
  if (options.parallel) {
    std::vector<std::future<std::vector<int>>> pending;
    for (int f = 0; f < k; ++f) pending.push_back(std::async(std::launch::async, run_fold, f));
    for (int f = 0; f < k; ++f) predictions[f] = pending[f].get();
  } else {
    for (int f = 0; f < k; ++f) predictions[f] = run_fold(f);
  }

  EvaluationReport report;
  report.fold_count = k;
  report.config = config;
  for (int f = 0; f < k; ++f) {
    const ConfusionMatrix m = confusion_matrix(splits[f].truths, predictions[f]);
    const auto n = splits[f].test.size();
    report.per_fold_accuracy.push_back(n == 0 ? 0.0 : 100.0 * static_cast<double>(m.trace()) / n);
    report.per_fold_test_size.push_back(n);
    report.confusion += m;
  }
  double sum = 0.0;
  for (double a : report.per_fold_accuracy) sum += a;
  report.mean_accuracy = sum / k;
  return report;
}

int select_hidden_size(std::span<const SweepRow> rows) {
  if (rows.empty()) throw Error(Errc::invalid_argument, "empty sweep");
  const SweepRow* best = &rows.front();
  for (const SweepRow& row : rows) {
    const double mean = round_half_up(row.mean_accuracy);
    const double best_mean = round_half_up(best->mean_accuracy);
    if (mean > best_mean || (mean == best_mean && row.hidden_size < best->hidden_size)) best = &row;
  }
  return best->hidden_size;
}

SweepTable sweep_hidden(const Dataset& data, std::span<const int> sizes, const TrainingConfig& config,
                        const CrossValidationOptions& options, const FoldEvaluator& evaluator) {
  if (sizes.empty()) throw Error(Errc::invalid_argument, "no hidden sizes to sweep");
  SweepTable table;
  for (int size : sizes) {
    TrainingConfig sized = config;
    sized.hidden_size = size;
    const EvaluationReport report = cross_validate(data, sized, options, evaluator);
    table.rows.push_back(SweepRow{size, report.per_fold_accuracy, report.mean_accuracy});
  }
  table.selected_size = select_hidden_size(table.rows);
  return table;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

std::string format_rate(double percent) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", round_half_up(percent, 2));
  return buf;
}

void write_report_csv(const EvaluationReport& report, std::ostream& out) {
  out << "fold,accuracy\n";
  for (std::size_t f = 0; f < report.per_fold_accuracy.size(); ++f) {
    out << (f + 1) << ',' << format_rate(report.per_fold_accuracy[f]) << '\n';
  }
  out << "mean," << format_rate(report.mean_accuracy) << '\n';
}

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
  const std::size_t folds = table.rows.empty() ? 0 : table.rows.front().per_fold_accuracy.size();
  out << "size";
  for (std::size_t f = 1; f <= folds; ++f) out << ",fold" << f;
  out << ",mean\n";
  for (const SweepRow& row : table.rows) {
    out << row.hidden_size;
    for (double a : row.per_fold_accuracy) out << ',' << format_rate(a);
    out << ',' << format_rate(row.mean_accuracy) << '\n';
  }
}

void write_confusion_text(const ConfusionMatrix& matrix, std::ostream& out) {
  out << std::setw(9) << "true\\pred";
  for (int j = 0; j < kClassCount; ++j) out << std::setw(7) << j;
  out << '\n';
  for (int i = 0; i < kClassCount; ++i) {
    out << std::setw(9) << i;
    for (int j = 0; j < kClassCount; ++j) out << std::setw(7) << matrix.at(i, j);
    out << '\n';
  }
  out << "total " << matrix.total() << ", correct " << matrix.trace() << '\n';
}

}  // namespace digitrec
