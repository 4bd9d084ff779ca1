#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "histspec/image.hpp"

namespace histspec::pgm {

// Reads a P2 (ASCII) or P5 (binary) graymap with maxval <= 255. Comments
// ('#' to end of line) are allowed between header tokens. The image gets
// maxval + 1 levels. Throws FormatError on malformed input.
GrayImage read(std::istream& in);
GrayImage read_file(const std::filesystem::path& path);

// Canonical P5: "P5\n<w> <h>\n<maxval>\n" followed by one byte per sample,
// with maxval = levels - 1. Throws InvalidArgument for levels > 256.
void write(std::ostream& out, const GrayImage& img);
void write_file(const std::filesystem::path& path, const GrayImage& img);

}  // namespace histspec::pgm
