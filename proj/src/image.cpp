#include "histspec/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "histspec/errors.hpp"

namespace histspec {

namespace {

void check_levels(std::uint32_t levels) {
    if (levels < 1 || levels > 65536) {
        throw InvalidArgument("levels must be in [1, 65536], got " +
                              std::to_string(levels));
    }
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height,
                     std::uint32_t levels, Intensity fill)
    : width_(width), height_(height), levels_(levels),
      data_(width * height, fill) {
    check_levels(levels);
    if (fill >= levels) {
        throw InvalidArgument("fill value outside [0, levels)");
    }
}

GrayImage::GrayImage(std::size_t width, std::size_t height,
                     std::uint32_t levels, std::vector<Intensity> data)
    : width_(width), height_(height), levels_(levels), data_(std::move(data)) {
    check_levels(levels);
    if (data_.size() != width * height) {
        throw InvalidArgument("pixel buffer has " + std::to_string(data_.size()) +
                              " samples, expected " +
                              std::to_string(width * height));
    }
    auto bad = std::find_if(data_.begin(), data_.end(),
                            [levels](Intensity v) { return v >= levels; });
    if (bad != data_.end()) {
        throw InvalidArgument("sample " + std::to_string(*bad) +
                              " outside [0, " + std::to_string(levels) + ")");
    }
}

void GrayImage::set(std::size_t x, std::size_t y, Intensity value) {
    if (value >= levels_) {
        throw InvalidArgument("sample outside [0, levels)");
    }
    data_[y * width_ + x] = value;
}

RealImage::RealImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

RealImage::RealImage(std::size_t width, std::size_t height,
                     std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width * height) {
        throw InvalidArgument("real buffer has " + std::to_string(data_.size()) +
                              " samples, expected " +
                              std::to_string(width * height));
    }
}

RealImage RealImage::from_gray(const GrayImage& img) {
    std::vector<double> v(img.pixels().begin(), img.pixels().end());
    return RealImage(img.width(), img.height(), std::move(v));
}

bool RealImage::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

}  // namespace histspec
