#include "histspec/histogram.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "histspec/errors.hpp"

namespace histspec {

std::uint64_t Histogram::total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

Histogram histogram_of(const GrayImage& img) {
    Histogram h(img.levels());
    for (Intensity v : img.pixels()) {
        ++h[v];
    }
    return h;
}

Histogram rescale_histogram(const Histogram& h, std::uint64_t target_total) {
    const std::uint64_t sum = h.total();
    if (sum == 0) {
        throw InvalidArgument("cannot rescale an all-zero histogram");
    }
    if (target_total == 0) {
        throw InvalidArgument("target total must be positive");
    }

    // quota_i = h_i * target / sum, split into floor and remainder with exact
    // integer arithmetic.
    __extension__ typedef unsigned __int128 u128;
    const std::size_t n = h.levels();
    Histogram out(n);
    std::vector<std::uint64_t> remainder(n);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const u128 scaled = static_cast<u128>(h[i]) * target_total;
        out[i] = static_cast<std::uint64_t>(scaled / sum);
        remainder[i] = static_cast<std::uint64_t>(scaled % sum);
        assigned += out[i];
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainder[a] > remainder[b];
    });
    // At most n-1 units are left over, and every bin that receives one has a
    // strictly positive remainder, so empty bins never get filled.
    for (std::uint64_t k = 0; assigned < target_total; ++k, ++assigned) {
        ++out[order[k]];
    }
    return out;
}

Histogram generate_target(TargetKind kind, std::size_t levels, std::uint64_t total,
                          const GrayImage* source) {
    if (levels == 0) {
        throw InvalidArgument("target histogram needs at least one level");
    }
    switch (kind) {
        case TargetKind::uniform:
            return rescale_histogram(Histogram(std::vector<std::uint64_t>(levels, 1)),
                                     total);
        case TargetKind::linear: {
            std::vector<std::uint64_t> w(levels);
            std::iota(w.begin(), w.end(), std::uint64_t{1});
            return rescale_histogram(Histogram(std::move(w)), total);
        }
        case TargetKind::from_image:
            if (source == nullptr) {
                throw InvalidArgument("from_image target needs a source image");
            }
            if (source->levels() != levels) {
                throw DimensionMismatch("source image has " +
                                        std::to_string(source->levels()) +
                                        " levels, expected " + std::to_string(levels));
            }
            return rescale_histogram(histogram_of(*source), total);
    }
    throw InvalidArgument("unknown target kind");
}

}  // namespace histspec
