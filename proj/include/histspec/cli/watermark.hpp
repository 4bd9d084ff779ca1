#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "histspec/histogram.hpp"
#include "histspec/optimizer.hpp"

namespace histspec::watermark {

// Histogram-hole watermark. With `lo` the lowest occupied bin of the host,
// bit k controls bin lo + 2k + 1:
//   1 -> the bin is emptied, its count merged into bin lo + 2k
//   0 -> the bin is kept occupied (one pixel is borrowed from the nearest
//        uncontrolled bin holding at least two pixels if it was empty)
// Bin lo is never emptied, so the detector can find the same anchor.
struct WatermarkSpec {
    std::vector<bool> message;
    std::vector<std::size_t> hole_bins;
};

// Parses a string of '0'/'1' characters. Throws InvalidArgument otherwise.
std::vector<bool> parse_bits(std::string_view text);
std::string format_bits(const std::vector<bool>& bits);

// Number of bits the host histogram can carry.
std::size_t capacity(const Histogram& host);

// Throws CapacityError if the message does not fit.
WatermarkSpec plan(const Histogram& host, const std::vector<bool>& message);

// Target histogram realizing `spec` on `host`; sums to host.total().
Histogram embed_target(const Histogram& host, const WatermarkSpec& spec);

// Embeds `message` into `host` by SSIM-optimized exact histogram specification.
AscentResult embed(const GrayImage& host, const std::vector<bool>& message,
                   const AscentConfig& config);

// Reads `bits` bits: bit k is 1 iff bin lo + 2k + 1 is empty. Throws
// CapacityError when the image is empty of signal (no occupied bin) or the
// inspected bins run past the last level.
std::vector<bool> detect(const Histogram& marked, std::size_t bits);

}  // namespace histspec::watermark
