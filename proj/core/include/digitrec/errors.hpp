#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace digitrec {

enum class Errc {
  invalid_argument,
  no_foreground,
  bad_image,
  empty_dataset,
  dimension_mismatch,
  bad_magic,
  version_mismatch,
  truncated_stream,
  shape_mismatch,
  too_few_samples,
  length_mismatch,
  label_out_of_range,
  malformed_data,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

// All library failures are reported through this type; code() identifies
// the condition, what() carries a human readable message prefixed by the
// condition name.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  // The message without the condition-name prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

}  // namespace digitrec
