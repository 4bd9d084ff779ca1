#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "histspec/image.hpp"

namespace histspec {

// L non-negative bin counts h_0 .. h_{L-1}.
class Histogram {
public:
    Histogram() = default;
    explicit Histogram(std::size_t levels) : counts_(levels, 0) {}
    explicit Histogram(std::vector<std::uint64_t> counts)
        : counts_(std::move(counts)) {}

    std::size_t levels() const noexcept { return counts_.size(); }
    std::uint64_t total() const noexcept;

    std::uint64_t operator[](std::size_t bin) const noexcept { return counts_[bin]; }
    std::uint64_t& operator[](std::size_t bin) noexcept { return counts_[bin]; }

    std::span<const std::uint64_t> counts() const noexcept { return counts_; }

    friend bool operator==(const Histogram&, const Histogram&) = default;

private:
    std::vector<std::uint64_t> counts_;
};

Histogram histogram_of(const GrayImage& img);

// Scales `h` to sum exactly to `target_total` by largest-remainder
// apportionment; equal remainders go to the lower bin index. Empty bins stay
// empty. Throws InvalidArgument for an all-zero histogram or target_total == 0.
Histogram rescale_histogram(const Histogram& h, std::uint64_t target_total);

enum class TargetKind { uniform, linear, from_image };

// Target histograms with `levels` bins summing to `total`:
//   uniform    -> all bins equal (exact histogram equalization)
//   linear     -> h_i proportional to i + 1
//   from_image -> histogram of `source`, rescaled
// `source` is required for from_image and must have `levels` levels.
Histogram generate_target(TargetKind kind, std::size_t levels, std::uint64_t total,
                          const GrayImage* source = nullptr);

// Number of distinct images with histogram `h`: the multinomial coefficient
// M! / (h_0! h_1! ... h_{L-1}!) with M = sum of counts.
mpz_class count_images_with_histogram(const Histogram& h);

}  // namespace histspec
