#include "histspec/ehs.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <ranges>
#include <utility>
#include <string>

#include "histspec/errors.hpp"

namespace histspec {

namespace {

void check_target(std::size_t pixels, const Histogram& target) {
    if (target.levels() == 0 || target.levels() > 65536) {
        throw InvalidArgument("target histogram must have 1..65536 bins");
    }
    if (target.total() != pixels) {
        throw HistogramMismatch("target histogram sums to " +
                                std::to_string(target.total()) + ", image has " +
                                std::to_string(pixels) + " pixels");
    }
}

void check_finite(const RealImage& x) {
    if (!x.all_finite()) {
        throw NumericalError("EHS input contains non-finite values");
    }
}

// Writes intensities into `out` following `order` (raster indices in
// ascending key order): the first h_0 pixels get 0, the next h_1 get 1, ...
template <class OrderRange>
std::vector<Intensity> fill_bins(const OrderRange& order, const Histogram& target) {
    std::vector<Intensity> out(target.total());
    std::size_t bin = 0;
    std::uint64_t left = target[0];
    for (std::size_t index : order) {
        while (left == 0) {
            ++bin;
            left = target[bin];
        }
        out[index] = static_cast<Intensity>(bin);
        --left;
    }
    return out;
}

// Unsigned key with the same order as the double; -0 and +0 map together.
std::uint64_t order_key(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
    return bits >> 63 ? ~bits : bits | (std::uint64_t{1} << 63);
}

// Sorts ascending. LSD radix sort with 11-bit digits; all digit counts come
// from one pass, and digits shared by every value are skipped.
void radix_sort(std::vector<std::uint64_t>& items, std::vector<std::uint64_t>& scratch) {
    constexpr unsigned kBits = 11;
    constexpr unsigned kDigits = (64 + kBits - 1) / kBits;
    constexpr std::size_t kBuckets = std::size_t{1} << kBits;
    const std::size_t n = items.size();
    scratch.resize(n);

    std::vector<std::array<std::size_t, kBuckets>> count(kDigits);
    for (auto& c : count) {
        c.fill(0);
    }
    for (std::uint64_t v : items) {
        for (unsigned d = 0; d < kDigits; ++d) {
            ++count[d][(v >> (d * kBits)) & (kBuckets - 1)];
        }
    }
    for (unsigned d = 0; d < kDigits; ++d) {
        auto& c = count[d];
        if (std::find(c.begin(), c.end(), n) != c.end()) {
            continue;
        }
        std::size_t pos = 0;
        for (std::size_t& v : c) {
            pos += std::exchange(v, pos);
        }
        const unsigned shift = d * kBits;
        for (std::uint64_t v : items) {
            scratch[c[(v >> shift) & (kBuckets - 1)]++] = v;
        }
        items.swap(scratch);
    }
}

// Sum of lengths of runs of length >= 2 in a sorted sequence, under `equal`.
template <class It, class Eq>
std::size_t tied_pixels(It first, It last, Eq equal) {
    std::size_t ties = 0;
    while (first != last) {
        It run_end = std::next(first);
        while (run_end != last && equal(*first, *run_end)) {
            ++run_end;
        }
        const auto run = static_cast<std::size_t>(std::distance(first, run_end));
        if (run > 1) {
            ties += run;
        }
        first = run_end;
    }
    return ties;
}

// Box sums of side 2r+1 with replicate extension, one separable pass each way.
std::vector<double> box_sum(const RealImage& x, std::size_t radius) {
    const auto w = static_cast<std::ptrdiff_t>(x.width());
    const auto h = static_cast<std::ptrdiff_t>(x.height());
    const auto r = static_cast<std::ptrdiff_t>(radius);
    auto clamp = [](std::ptrdiff_t v, std::ptrdiff_t n) {
        return std::clamp<std::ptrdiff_t>(v, 0, n - 1);
    };

    std::vector<double> rows(x.size());
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            double s = 0.0;
            for (std::ptrdiff_t k = -r; k <= r; ++k) {
                s += x(static_cast<std::size_t>(clamp(c + k, w)),
                       static_cast<std::size_t>(y));
            }
            rows[static_cast<std::size_t>(y * w + c)] = s;
        }
    }
    std::vector<double> out(x.size());
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            double s = 0.0;
            for (std::ptrdiff_t k = -r; k <= r; ++k) {
                s += rows[static_cast<std::size_t>(clamp(y + k, h) * w + c)];
            }
            out[static_cast<std::size_t>(y * w + c)] = s;
        }
    }
    return out;
}

}  // namespace

EhsReport classic_ehs(const RealImage& x, const Histogram& target) {
    check_target(x.size(), target);
    check_finite(x);

    if (x.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidArgument("image too large");
    }
    if (x.size() == 0) {
        EhsReport empty;
        empty.output = GrayImage(x.width(), x.height(), static_cast<std::uint32_t>(target.levels()),
                                 std::vector<Intensity>{});
        return empty;
    }
    // Each item packs the high bits of the key above the raster index, so
    // one 64-bit sort orders by truncated key, then index. Runs sharing a
    // truncated key are re-sorted on the full key unless truncation lost
    // nothing. Buffers are kept per thread; ascent calls this every iteration.
    const std::size_t n = x.size();
    const unsigned index_bits = std::max<unsigned>(1, static_cast<unsigned>(std::bit_width(n - 1)));
    const std::uint64_t index_mask = (std::uint64_t{1} << index_bits) - 1;
    thread_local std::vector<std::uint64_t> items, scratch;
    thread_local std::vector<std::pair<std::uint64_t, std::uint64_t>> run;
    items.resize(n);
    std::uint64_t dropped = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t key = order_key(x[i]);
        dropped |= key & index_mask;
        items[i] = (key & ~index_mask) | i;
    }
    radix_sort(items, scratch);

    std::size_t ties = 0;
    for (std::size_t first = 0; first < n;) {
        std::size_t last = first + 1;
        while (last < n && (items[last] & ~index_mask) == (items[first] & ~index_mask)) {
            ++last;
        }
        if (last - first > 1 && dropped == 0) {
            ties += last - first;
        } else if (last - first > 1) {
            run.clear();
            for (std::size_t k = first; k < last; ++k) {
                const std::uint64_t index = items[k] & index_mask;
                run.emplace_back(order_key(x[index]), index);
            }
            std::sort(run.begin(), run.end());
            for (std::size_t k = first; k < last; ++k) {
                items[k] = (items[k] & ~index_mask) | run[k - first].second;
            }
            ties += tied_pixels(run.begin(), run.end(), [](const auto& u, const auto& v) {
                return u.first == v.first;
            });
        }
        first = last;
    }

    EhsReport report;
    report.output = GrayImage(
        x.width(), x.height(), static_cast<std::uint32_t>(target.levels()),
        fill_bins(items | std::views::transform([&](std::uint64_t v) {
                      return static_cast<std::size_t>(v & index_mask);
                  }),
                  target));
    report.unresolved_ties = ties;
    return report;
}

EhsReport classic_ehs(const GrayImage& img, const Histogram& target) {
    return classic_ehs(RealImage::from_gray(img), target);
}

std::vector<PixelKey> coltuc_keys(const RealImage& x) {
    std::vector<PixelKey> keys(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        keys[i].primary = x[i];
        keys[i].raster_index = i;
    }
    for (std::size_t j = 1; j <= kNestedNeighbourhoods; ++j) {
        const std::vector<double> sums = box_sum(x, j);
        const double area = static_cast<double>((2 * j + 1) * (2 * j + 1));
        for (std::size_t i = 0; i < x.size(); ++i) {
            keys[i].aux[j - 1] = sums[i] / area;
        }
    }
    return keys;
}

std::vector<PixelKey> coltuc_keys(const GrayImage& img) {
    return coltuc_keys(RealImage::from_gray(img));
}

EhsReport strict_ordering_ehs(const RealImage& x, const Histogram& target) {
    check_target(x.size(), target);
    check_finite(x);

    std::vector<PixelKey> keys = coltuc_keys(x);
    std::sort(keys.begin(), keys.end());

    std::vector<std::size_t> order(keys.size());
    std::transform(keys.begin(), keys.end(), order.begin(),
                   [](const PixelKey& k) { return k.raster_index; });

    EhsReport report;
    report.output = GrayImage(x.width(), x.height(),
                              static_cast<std::uint32_t>(target.levels()),
                              fill_bins(order, target));
    report.unresolved_ties =
        tied_pixels(keys.begin(), keys.end(), [](const PixelKey& a, const PixelKey& b) {
            return a.primary == b.primary && a.aux == b.aux;
        });
    return report;
}

EhsReport strict_ordering_ehs(const GrayImage& img, const Histogram& target) {
    return strict_ordering_ehs(RealImage::from_gray(img), target);
}

EhsReport exact_histogram_specification(EhsVariant variant, const RealImage& x,
                                        const Histogram& target) {
    switch (variant) {
        case EhsVariant::classic:
            return classic_ehs(x, target);
        case EhsVariant::strict_ordering:
            return strict_ordering_ehs(x, target);
    }
    throw InvalidArgument("unknown EHS variant");
}

}  // namespace histspec
