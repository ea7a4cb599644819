#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "digitrec/imgproc.hpp"

namespace digitrec {

// Portable graymap reader for "P2" (ASCII) and "P5" (binary) files with
// maxval <= 255. Samples are rescaled to 0..255 when maxval < 255.
// Malformed input throws Errc::bad_image.
GrayImage parse_pgm(std::string_view bytes);
GrayImage read_pgm(const std::filesystem::path& path);

// Writes binary "P5" with maxval 255.
void write_pgm(std::ostream& out, const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

// Ink renders as 0, paper as 255.
GrayImage to_gray(const BinaryImage& img);

}  // namespace digitrec
