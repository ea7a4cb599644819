#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "digitrec/errors.hpp"
#include "digitrec/eval.hpp"

namespace digitrec {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

void write_feature_csv(const Dataset& data, std::ostream& out) {
  out << "label";
  for (int i = 0; i < kFeatureCount; ++i) out << ",f" << i;
  out << '\n';
  char buf[40];
  for (const LabeledSample& s : data.samples) {
    if (static_cast<int>(s.features.size()) != kFeatureCount) {
      throw Error(Errc::dimension_mismatch, "feature CSV rows need 76 features");
    }
    out << s.label;
    for (double v : s.features) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

Dataset read_feature_csv(std::istream& in, const std::string& source) {
  auto fail = [&](long line_no, const std::string& why) {
    return Error(Errc::malformed_data, source + ":" + std::to_string(line_no) + ": " + why);
  };

  std::string line;
  long line_no = 1;
  if (!std::getline(in, line)) throw fail(line_no, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (static_cast<int>(header.size()) != kFeatureCount + 1 || header[0] != "label") {
    throw fail(line_no, "header must be label,f0..f75");
  }

  Dataset data;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (static_cast<int>(fields.size()) != kFeatureCount + 1) {
      throw fail(line_no, "expected 77 columns, got " + std::to_string(fields.size()));
    }
    LabeledSample sample;
    auto [lp, lec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), sample.label);
    if (lec != std::errc{} || lp != fields[0].data() + fields[0].size() || sample.label < 0 ||
        sample.label >= kClassCount) {
      throw fail(line_no, "bad label '" + std::string(fields[0]) + "'");
    }
    sample.features.resize(kFeatureCount);
    for (int i = 0; i < kFeatureCount; ++i) {
      const std::string field(fields[i + 1]);
      std::size_t used = 0;
      try {
        sample.features[i] = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != field.size()) throw fail(line_no, "bad value '" + field + "'");
    }
    data.add(std::move(sample), source + ":" + std::to_string(line_no));
  }
  return data;
}

}  // namespace digitrec
