#include "histspec/cli/watermark.hpp"

#include <optional>
#include <string>

#include "histspec/errors.hpp"

namespace histspec::watermark {

namespace {

std::optional<std::size_t> lowest_occupied(const Histogram& h) {
    for (std::size_t i = 0; i < h.levels(); ++i) {
        if (h[i] > 0) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> highest_occupied(const Histogram& h) {
    for (std::size_t i = h.levels(); i-- > 0;) {
        if (h[i] > 0) {
            return i;
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<bool> parse_bits(std::string_view text) {
    std::vector<bool> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw InvalidArgument("watermark message must consist of '0' and '1'");
        }
        bits.push_back(c == '1');
    }
    return bits;
}

std::string format_bits(const std::vector<bool>& bits) {
    std::string s;
    for (bool b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

std::size_t capacity(const Histogram& host) {
    const auto lo = lowest_occupied(host);
    const auto hi = highest_occupied(host);
    if (!lo) {
        return 0;
    }
    return (*hi - *lo + 1) / 2;
}

WatermarkSpec plan(const Histogram& host, const std::vector<bool>& message) {
    const std::size_t cap = capacity(host);
    if (message.size() > cap) {
        throw CapacityError("message of " + std::to_string(message.size()) +
                            " bits exceeds capacity of " + std::to_string(cap) + " bits");
    }
    WatermarkSpec spec;
    spec.message = message;
    if (message.empty()) {
        return spec;
    }
    const std::size_t lo = *lowest_occupied(host);
    for (std::size_t k = 0; k < message.size(); ++k) {
        if (message[k]) {
            spec.hole_bins.push_back(lo + 2 * k + 1);
        }
    }
    return spec;
}

Histogram embed_target(const Histogram& host, const WatermarkSpec& spec) {
    Histogram target = host;
    if (spec.message.empty()) {
        return target;
    }
    const std::size_t lo = *lowest_occupied(host);
    const std::size_t last_controlled = lo + 2 * spec.message.size() - 1;
    auto controlled = [&](std::size_t bin) {
        return bin > lo && bin <= last_controlled && (bin - lo) % 2 == 1;
    };

    for (std::size_t bin : spec.hole_bins) {
        target[bin - 1] += target[bin];
        target[bin] = 0;
    }
    for (std::size_t k = 0; k < spec.message.size(); ++k) {
        const std::size_t bin = lo + 2 * k + 1;
        if (spec.message[k] || target[bin] > 0) {
            continue;
        }
        std::optional<std::size_t> donor;
        for (std::size_t d = 1; d < target.levels() && !donor; ++d) {
            for (std::size_t cand : {bin - d, bin + d}) {
                // bin - d wraps for d > bin; the bound check rejects it.
                if (cand < target.levels() && !controlled(cand) && target[cand] >= 2) {
                    donor = cand;
                    break;
                }
            }
        }
        if (!donor) {
            throw CapacityError("no bin can spare a pixel to keep bin " +
                                std::to_string(bin) + " occupied");
        }
        --target[*donor];
        ++target[bin];
    }
    return target;
}

AscentResult embed(const GrayImage& host, const std::vector<bool>& message,
                   const AscentConfig& config) {
    const Histogram h = histogram_of(host);
    return ascend(host, embed_target(h, plan(h, message)), config);
}

std::vector<bool> detect(const Histogram& marked, std::size_t bits) {
    const auto lo = lowest_occupied(marked);
    if (!lo) {
        throw CapacityError("histogram has no occupied bin");
    }
    if (bits == 0) {
        return {};
    }
    if (*lo + 2 * bits - 1 >= marked.levels()) {
        throw CapacityError("cannot read " + std::to_string(bits) +
                            " bits: inspected bins run past the last level");
    }
    std::vector<bool> out(bits);
    for (std::size_t k = 0; k < bits; ++k) {
        out[k] = marked[*lo + 2 * k + 1] == 0;
    }
    return out;
}

}  // namespace histspec::watermark
