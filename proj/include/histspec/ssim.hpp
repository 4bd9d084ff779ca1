#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "histspec/image.hpp"

namespace histspec {

struct SsimParams {
    std::size_t window_size = 11;
    double window_sigma = 1.5;
    double c1 = 6.5025;   // (0.01 * 255)^2
    double c2 = 58.5225;  // (0.03 * 255)^2

    // Stabilizers C1 = (0.01 (L-1))^2, C2 = (0.03 (L-1))^2 for L levels.
    static SsimParams for_levels(std::uint32_t levels);

    // Throws InvalidArgument unless window_size is odd, sigma > 0, c1, c2 > 0.
    void validate() const;
};

// Normalized, symmetric 2-D Gaussian kernel, row-major size x size.
// Throws InvalidArgument for an even size or non-positive sigma.
std::vector<double> gaussian_window(std::size_t size, double sigma);

// Local statistics and the SSIM map of a pair of images. Local moments are
// Gaussian-weighted over the window, computed at full image size with
// half-sample symmetric boundary extension.
struct SsimFields {
    RealImage mu_x, mu_y;
    RealImage sigma2_x, sigma2_y;
    RealImage sigma_xy;
    RealImage ssim_map;
    RealImage denom;  // (mu_x^2 + mu_y^2 + C1)(sigma_x^2 + sigma_y^2 + C2)
    RealImage m1;     // auxiliary map of the closed-form gradient
};

// Throws DimensionMismatch if shapes differ, InvalidArgument if the images
// are smaller than the window in either dimension.
SsimFields ssim_fields(const RealImage& x, const RealImage& y, const SsimParams& p);

// Mean of the SSIM map.
double ssim_index(const RealImage& x, const RealImage& y, const SsimParams& p);

// d SSIM(reference, y) / d y for every pixel of y (already divided by the
// pixel count).
RealImage ssim_gradient(const RealImage& reference, const RealImage& y,
                        const SsimParams& p);

struct SsimWithGradient {
    double ssim = 0.0;
    RealImage gradient;
};

// Same values as ssim_index and ssim_gradient, sharing the five local-moment
// convolutions between them.
SsimWithGradient ssim_with_gradient(const RealImage& reference, const RealImage& y,
                                    const SsimParams& p);

// Number of 2-D window convolutions performed on this thread so far. Used by
// tests to pin the 5 (index) + 3 (gradient) convolution budget.
std::uint64_t convolution_count() noexcept;

namespace detail {

// w * img at full size with half-sample symmetric extension
// (index -1 maps to 0, n maps to n-1). With a symmetric kernel this operator
// is self-adjoint, which the gradient relies on.
RealImage convolve_symmetric(const RealImage& img, const std::vector<double>& kernel1d);

std::vector<double> gaussian_kernel_1d(std::size_t size, double sigma);

}  // namespace detail

}  // namespace histspec
