#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "histspec/histogram.hpp"
#include "histspec/image.hpp"

namespace histspec {

// Number of nested neighbourhood means used for strict ordering.
inline constexpr std::size_t kNestedNeighbourhoods = 6;

// Sort key of one pixel: compared lexicographically over
// (primary, aux..., raster index).
struct PixelKey {
    double primary = 0.0;
    std::array<double, kNestedNeighbourhoods> aux{};
    std::size_t raster_index = 0;

    friend auto operator<=>(const PixelKey&, const PixelKey&) = default;
};

struct EhsReport {
    GrayImage output;
    // Pixels that share their primary value and every auxiliary key with at
    // least one other pixel; their order falls back to raster index.
    std::size_t unresolved_ties = 0;
};

// Exact histogram specification ordering pixels by value only, ties broken
// by raster index. The first h_0 pixels in that order get intensity 0, the
// next h_1 get 1, and so on. The output has `target.levels()` levels.
// Throws HistogramMismatch if target.total() != x.size().
EhsReport classic_ehs(const RealImage& x, const Histogram& target);
EhsReport classic_ehs(const GrayImage& img, const Histogram& target);

// Per-pixel strict-ordering keys: aux[j-1] is the mean over the
// (2j+1)x(2j+1) square centred on the pixel, j = 1..6, with replicate
// boundary extension.
std::vector<PixelKey> coltuc_keys(const RealImage& x);
std::vector<PixelKey> coltuc_keys(const GrayImage& img);

// Exact histogram specification with the pixel order given by coltuc_keys.
EhsReport strict_ordering_ehs(const RealImage& x, const Histogram& target);
EhsReport strict_ordering_ehs(const GrayImage& img, const Histogram& target);

enum class EhsVariant { classic, strict_ordering };

EhsReport exact_histogram_specification(EhsVariant variant, const RealImage& x,
                                        const Histogram& target);

}  // namespace histspec
