#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "digitrec/errors.hpp"
#include "digitrec/features.hpp"
#include "digitrec/mlp.hpp"
#include "digitrec/pgm.hpp"

namespace digitrec::cli {

namespace fs = std::filesystem;

namespace {

int parse_int(std::string_view text, std::string_view spec) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::invalid_argument, "bad size spec '" + std::string(spec) + "'");
  }
  return value;
}

ThresholdOptions threshold_from(const std::string& text, bool invert) {
  ThresholdOptions opts;
  opts.invert = invert;
  if (text == "otsu") {
    opts.use_otsu = true;
    return opts;
  }
  int value = -1;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0 || value > 255) {
    throw Error(Errc::invalid_argument, "--threshold must be 0..255 or 'otsu', got '" + text + "'");
  }
  opts.threshold = value;
  return opts;
}

void require_two_classes(const Dataset& data) {
  const auto counts = data.class_counts();
  const auto present = std::count_if(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; });
  if (present < 2) {
    throw Error(Errc::too_few_samples, "need samples from at least 2 classes, found " + std::to_string(present));
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  return out;
}

// Options shared by the training-related commands.
struct TrainFlags {
  std::string data;
  std::string threshold = std::to_string(kDefaultThreshold);
  bool invert = false;
  TrainingConfig config;

  void attach(CLI::App& cmd, bool with_hidden = true) {
    cmd.add_option("--data", data, "Corpus directory (subdirectories 0..9) or feature CSV")->required();
    cmd.add_option("--threshold", threshold, "Ink threshold 0..255, or 'otsu'")->capture_default_str();
    cmd.add_flag("--invert", invert, "Ink is lighter than paper");
    if (with_hidden) {
      cmd.add_option("--hidden", config.hidden_size, "Hidden layer size")->capture_default_str()->check(CLI::PositiveNumber);
    }
    cmd.add_option("--lr", config.learning_rate, "Learning rate")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd.add_option("--momentum", config.momentum, "Momentum term in [0, 1)")->capture_default_str()->check(CLI::Range(0.0, 0.999999999));
    cmd.add_option("--epochs", config.max_epochs, "Maximum epochs")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd.add_option("--seed", config.seed, "Random seed")->capture_default_str();
    cmd.add_option("--tolerance", config.stop_tolerance, "Stop when SSE improves by less than this")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd.add_option("--patience", config.patience, "Consecutive stalled epochs before stopping")->capture_default_str()->check(CLI::PositiveNumber);
  }

  Dataset load(std::ostream& err) const {
    return load_dataset(data, threshold_from(threshold, invert), err);
  }
};

int cmd_extract(const std::string& data_dir, const fs::path& out_csv, const ThresholdOptions& threshold,
                std::ostream& err) {
  if (!fs::is_directory(data_dir)) throw Error(Errc::io_error, "not a directory: " + data_dir);
  const Dataset data = load_corpus(data_dir, threshold, err);
  if (data.empty()) throw Error(Errc::empty_dataset, "no images under " + data_dir);
  std::ofstream out = open_output(out_csv);
  write_feature_csv(data, out);
  err << "wrote " << data.size() << " rows to " << out_csv.string() << '\n';
  return kSuccess;
}

int cmd_train(const TrainFlags& flags, const fs::path& model_out, std::ostream& out, std::ostream& err) {
  const Dataset data = flags.load(err);
  if (data.empty()) throw Error(Errc::empty_dataset, "no samples in " + flags.data);
  require_two_classes(data);

  const TrainResult result = train(init_model(flags.config), data.samples, flags.config);
  save_model(result.model, model_out);

  double sse = 0.0;
  std::size_t correct = 0;
  for (const LabeledSample& s : data.samples) {
    sse += 2.0 * sample_error(result.model, s);
    if (predict(result.model, s.features) == s.label) ++correct;
  }
  char buf[64];
  out << "model: " << model_out.string() << " (" << result.model.input_size() << '-'
      << result.model.hidden_size() << '-' << result.model.output_size() << ")\n";
  out << "epochs: " << result.loss_history.size() << '\n';
  std::snprintf(buf, sizeof buf, "%.6f", sse);
  out << "final SSE: " << buf << '\n';
  out << "training accuracy: " << format_rate(100.0 * static_cast<double>(correct) / data.size()) << "%\n";
  return kSuccess;
}

int cmd_predict(const fs::path& model_file, const fs::path& image_file, const ThresholdOptions& threshold,
                std::ostream& out) {
  const MlpModel model = load_model(model_file);
  if (model.input_size() != kFeatureCount || model.output_size() != kClassCount) {
    throw Error(Errc::shape_mismatch, model_file.string() + ": expected a 76-H-10 model");
  }
  const BinaryImage canonical = normalize_image(read_pgm(image_file), threshold);
  const FeatureVector features = extract_features(canonical);
  const std::vector<double> activations = forward(model, features);

  out << argmax(activations) << '\n';
  char buf[32];
  for (std::size_t i = 0; i < activations.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", activations[i]);
    out << (i ? " " : "") << buf;
  }
  out << '\n';
  return kSuccess;
}

int cmd_crossval(const TrainFlags& flags, int folds, const fs::path& report_out, std::string confusion_out,
                 const Hooks& hooks, std::ostream& out, std::ostream& err) {
  const Dataset data = flags.load(err);
  const FoldEvaluator evaluator = hooks.evaluator ? hooks.evaluator : FoldEvaluator(train_and_predict);
  const EvaluationReport report = cross_validate(data, flags.config, {folds, true}, evaluator);

  std::ofstream csv = open_output(report_out);
  write_report_csv(report, csv);
  if (confusion_out.empty()) confusion_out = report_out.string() + ".confusion.txt";
  std::ofstream confusion = open_output(confusion_out);
  write_confusion_text(report.confusion, confusion);

  for (std::size_t f = 0; f < report.per_fold_accuracy.size(); ++f) {
    err << "fold " << (f + 1) << ": " << format_rate(report.per_fold_accuracy[f]) << "% on "
        << report.per_fold_test_size[f] << " test samples\n";
  }
  out << "mean accuracy: " << format_rate(report.mean_accuracy) << "%\n";
  return kSuccess;
}

int cmd_sweep(const TrainFlags& flags, const std::string& sizes_spec, int folds, const fs::path& csv_out,
              const Hooks& hooks, std::ostream& out, std::ostream& err) {
  const std::vector<int> sizes = parse_size_spec(sizes_spec);
  const Dataset data = flags.load(err);
  const FoldEvaluator evaluator = hooks.evaluator ? hooks.evaluator : FoldEvaluator(train_and_predict);
  const SweepTable table = sweep_hidden(data, sizes, flags.config, {folds, true}, evaluator);

  std::ofstream csv = open_output(csv_out);
  write_sweep_csv(table, csv);
  for (const SweepRow& row : table.rows) {
    err << "hidden " << row.hidden_size << ": mean " << format_rate(row.mean_accuracy) << "%\n";
  }
  out << "selected hidden size: " << table.selected_size << '\n';
  return kSuccess;
}

int cmd_make_toy(const fs::path& out_dir, int per_class, double noise, std::uint64_t seed, std::ostream& err) {
  const std::vector<ToyImage> images = make_toy_images(per_class, noise, seed);
  std::vector<int> next(kClassCount, 0);
  for (const ToyImage& toy : images) {
    const fs::path dir = out_dir / std::to_string(toy.label);
    fs::create_directories(dir);
    char name[32];
    std::snprintf(name, sizeof name, "%05d.pgm", next[toy.label]++);
    write_pgm(dir / name, to_gray(toy.image));
  }
  err << "wrote " << images.size() << " images under " << out_dir.string() << '\n';
  return kSuccess;
}

}  // namespace

std::vector<int> parse_size_spec(std::string_view spec) {
  std::vector<int> sizes;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', start), spec.size());
    const std::string_view item = spec.substr(start, comma - start);
    const std::size_t c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      sizes.push_back(parse_int(item, spec));
    } else {
      const std::size_t c2 = item.find(':', c1 + 1);
      if (c2 == std::string_view::npos) throw Error(Errc::invalid_argument, "size range needs start:end:step");
      const int first = parse_int(item.substr(0, c1), spec);
      const int last = parse_int(item.substr(c1 + 1, c2 - c1 - 1), spec);
      const int step = parse_int(item.substr(c2 + 1), spec);
      if (step <= 0 || first > last) {
        throw Error(Errc::invalid_argument, "size range '" + std::string(item) + "' must ascend with a positive step");
      }
      for (int v = first; v <= last; v += step) sizes.push_back(v);
    }
    start = comma + 1;
  }
  if (sizes.empty()) throw Error(Errc::invalid_argument, "empty size spec");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw Error(Errc::invalid_argument, "hidden sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) {
      throw Error(Errc::invalid_argument, "size spec '" + std::string(spec) + "' is not strictly ascending");
    }
  }
  return sizes;
}

Dataset load_corpus(const fs::path& root, const ThresholdOptions& threshold, std::ostream& log) {
  if (!fs::is_directory(root)) throw Error(Errc::io_error, "not a directory: " + root.string());
  Dataset data;
  std::size_t skipped = 0;
  for (int label = 0; label < kClassCount; ++label) {
    const fs::path dir = root / std::to_string(label);
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file() || entry.path().filename().string().starts_with(".")) continue;
      files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::size_t kept = 0;
    for (const fs::path& file : files) {
      const GrayImage gray = read_pgm(file);
      try {
        data.add(make_sample(extract_features(normalize_image(gray, threshold)), label), file.string());
        ++kept;
      } catch (const Error& e) {
        if (e.code() != Errc::no_foreground) throw;
        log << "warning: skipping blank image " << file.string() << '\n';
        ++skipped;
      }
    }
    log << "class " << label << ": " << kept << " samples\n";
  }
  if (skipped > 0) log << "skipped " << skipped << " blank images\n";
  return data;
}

Dataset load_dataset(const fs::path& path, const ThresholdOptions& threshold, std::ostream& log) {
  if (fs::is_regular_file(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    return read_feature_csv(in, path.string());
  }
  return load_corpus(path, threshold, log);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  CLI::App app{"Handwritten digit recognition: features, MLP training, cross-validation", "digitrec"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  // extract
  std::string extract_data;
  std::string extract_out;
  std::string extract_threshold = std::to_string(kDefaultThreshold);
  bool extract_invert = false;
  CLI::App* extract = app.add_subcommand("extract", "Write the 77-column feature CSV for a corpus");
  extract->add_option("--data", extract_data, "Corpus directory (subdirectories 0..9)")->required();
  extract->add_option("--out", extract_out, "Output CSV")->required();
  extract->add_option("--threshold", extract_threshold, "Ink threshold 0..255, or 'otsu'")->capture_default_str();
  extract->add_flag("--invert", extract_invert, "Ink is lighter than paper");

  // train
  TrainFlags train_flags;
  std::string model_out;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a 76-H-10 MLP and write the model file");
  train_flags.attach(*train_cmd);
  train_cmd->add_option("--model", model_out, "Output model file")->required();

  // predict
  std::string predict_model;
  std::string predict_image;
  std::string predict_threshold = std::to_string(kDefaultThreshold);
  bool predict_invert = false;
  CLI::App* predict_cmd = app.add_subcommand("predict", "Classify one PGM image");
  predict_cmd->add_option("--model", predict_model, "Model file")->required();
  predict_cmd->add_option("--image", predict_image, "PGM image")->required();
  predict_cmd->add_option("--threshold", predict_threshold, "Ink threshold 0..255, or 'otsu'")->capture_default_str();
  predict_cmd->add_flag("--invert", predict_invert, "Ink is lighter than paper");

  // crossval
  TrainFlags cv_flags;
  int cv_folds = 3;
  std::string cv_report;
  std::string cv_confusion;
  CLI::App* crossval = app.add_subcommand("crossval", "Stratified k-fold cross-validation");
  cv_flags.attach(*crossval);
  crossval->add_option("--folds,-k", cv_folds, "Number of folds")->capture_default_str()->check(CLI::Range(2, 1000));
  crossval->add_option("--report", cv_report, "Report CSV (fold,accuracy)")->required();
  crossval->add_option("--confusion", cv_confusion, "Confusion matrix text file (default <report>.confusion.txt)");

  // sweep
  TrainFlags sweep_flags;
  std::string sweep_sizes = "25:70:5";
  int sweep_folds = 3;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "Cross-validate a range of hidden layer sizes");
  sweep_flags.attach(*sweep, false);
  sweep->add_option("--sizes", sweep_sizes, "start:end:step and/or comma list")->capture_default_str();
  sweep->add_option("--folds,-k", sweep_folds, "Number of folds")->capture_default_str()->check(CLI::Range(2, 1000));
  sweep->add_option("--out", sweep_out, "Sweep CSV (size,fold1..k,mean)")->required();

  // make-toy
  std::string toy_out;
  int toy_per_class = 100;
  double toy_noise = 0.05;
  std::uint64_t toy_seed = 1;
  CLI::App* make_toy = app.add_subcommand("make-toy", "Write the synthetic glyph corpus as PGM files");
  make_toy->add_option("--out", toy_out, "Output corpus directory")->required();
  make_toy->add_option("--per-class", toy_per_class, "Images per class")->capture_default_str()->check(CLI::PositiveNumber);
  make_toy->add_option("--noise", toy_noise, "Pixel flip probability in [0, 1)")->capture_default_str()->check(CLI::Range(0.0, 0.999999));
  make_toy->add_option("--seed", toy_seed, "Random seed")->capture_default_str();

  std::vector<const char*> argv{"digitrec"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*extract) {
      return cmd_extract(extract_data, extract_out, threshold_from(extract_threshold, extract_invert), err);
    }
    if (*train_cmd) return cmd_train(train_flags, model_out, out, err);
    if (*predict_cmd) {
      return cmd_predict(predict_model, predict_image, threshold_from(predict_threshold, predict_invert), out);
    }
    if (*crossval) return cmd_crossval(cv_flags, cv_folds, cv_report, cv_confusion, hooks, out, err);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_sizes, sweep_folds, sweep_out, hooks, out, err);
    if (*make_toy) return cmd_make_toy(toy_out, toy_per_class, toy_noise, toy_seed, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::invalid_argument ? kUsageError : kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace digitrec::cli
