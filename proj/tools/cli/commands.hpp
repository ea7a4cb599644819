#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "digitrec/eval.hpp"
#include "digitrec/imgproc.hpp"

namespace digitrec::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2, kInternalError = 3 };

// Test seams. An unset evaluator means train_and_predict.
struct Hooks {
  FoldEvaluator evaluator;
};

// Runs one invocation; args excludes the program name. Data goes to `out`,
// diagnostics and logs to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

// "start:end:step" ranges and single sizes, comma separated, e.g. "25:70:5"
// or "25,65,70". The result must be non-empty and strictly ascending.
// Throws Error(Errc::invalid_argument) otherwise.
std::vector<int> parse_size_spec(std::string_view spec);

// Reads <root>/0 .. <root>/9. Every non-hidden regular file is decoded as a
// PGM; a file that fails to decode aborts the load with its path in the
// message. Blank images are skipped with a warning on `log`.
Dataset load_corpus(const std::filesystem::path& root, const ThresholdOptions& threshold,
                    std::ostream& log);

// A regular file is read as a feature CSV, a directory as an image corpus.
Dataset load_dataset(const std::filesystem::path& path, const ThresholdOptions& threshold,
                     std::ostream& log);

}  // namespace digitrec::cli
