#include "digitrec/errors.hpp"

namespace digitrec {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::no_foreground: return "NoForeground";
    case Errc::bad_image: return "BadImage";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::bad_magic: return "BadMagic";
    case Errc::version_mismatch: return "VersionMismatch";
    case Errc::truncated_stream: return "TruncatedStream";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::label_out_of_range: return "LabelOutOfRange";
    case Errc::malformed_data: return "MalformedData";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(message) {}

}  // namespace digitrec
