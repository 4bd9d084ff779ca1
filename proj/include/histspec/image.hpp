#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace histspec {

using Intensity = std::uint16_t;

// Integer-valued grayscale image with `levels` possible intensities
// (0 .. levels-1), stored row-major.
class GrayImage {
public:
    GrayImage() = default;

    // Constant image filled with `fill`.
    GrayImage(std::size_t width, std::size_t height, std::uint32_t levels,
              Intensity fill = 0);

    // Throws InvalidArgument if data.size() != width*height or any sample is
    // outside [0, levels).
    GrayImage(std::size_t width, std::size_t height, std::uint32_t levels,
              std::vector<Intensity> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::uint32_t levels() const noexcept { return levels_; }

    Intensity operator()(std::size_t x, std::size_t y) const noexcept {
        return data_[y * width_ + x];
    }

    std::span<const Intensity> pixels() const noexcept { return data_; }

    // Throws InvalidArgument for a value outside [0, levels).
    void set(std::size_t x, std::size_t y, Intensity value);

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::uint32_t levels_ = 256;
    std::vector<Intensity> data_;
};

// Real-valued image used for ascent intermediates and gradient fields.
class RealImage {
public:
    RealImage() = default;
    RealImage(std::size_t width, std::size_t height, double fill = 0.0);

    // Throws InvalidArgument if data.size() != width*height.
    RealImage(std::size_t width, std::size_t height, std::vector<double> data);

    // Intensities on the raw [0, levels-1] scale, no normalization.
    static RealImage from_gray(const GrayImage& img);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t x, std::size_t y) noexcept {
        return data_[y * width_ + x];
    }
    double operator()(std::size_t x, std::size_t y) const noexcept {
        return data_[y * width_ + x];
    }
    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    bool all_finite() const noexcept;

    friend bool operator==(const RealImage&, const RealImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

template <class A, class B>
bool same_shape(const A& a, const B& b) noexcept {
    return a.width() == b.width() && a.height() == b.height();
}

}  // namespace histspec
