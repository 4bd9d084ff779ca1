#pragma once

#include <filesystem>
#include <iosfwd>

#include "histspec/optimizer.hpp"

namespace histspec::trace_csv {

inline constexpr const char* kHeader = "iteration,ssim,predicted_delta,actual_delta,elapsed_s";

// Header line, then one row per iteration; reals with 12 significant digits.
void write(std::ostream& out, const AscentTrace& trace);
void write_file(const std::filesystem::path& path, const AscentTrace& trace);

}  // namespace histspec::trace_csv
