#include "histspec/ssim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "histspec/errors.hpp"

namespace histspec {

namespace {

thread_local std::uint64_t g_convolutions = 0;

void check_pair(const RealImage& x, const RealImage& y, const SsimParams& p) {
    p.validate();
    if (!same_shape(x, y)) {
        throw DimensionMismatch("SSIM inputs differ in size: " +
                                std::to_string(x.width()) + "x" +
                                std::to_string(x.height()) + " vs " +
                                std::to_string(y.width()) + "x" +
                                std::to_string(y.height()));
    }
    if (x.width() < p.window_size || x.height() < p.window_size) {
        throw InvalidArgument("image smaller than the " + std::to_string(p.window_size) +
                              "-pixel SSIM window");
    }
}

std::size_t reflect(std::ptrdiff_t e, std::ptrdiff_t n) {
    if (e < 0) {
        return static_cast<std::size_t>(-e - 1);
    }
    if (e >= n) {
        return static_cast<std::size_t>(2 * n - e - 1);
    }
    return static_cast<std::size_t>(e);
}

// Reuses `img` when the shape already matches.
void reshape(RealImage& img, std::size_t w, std::size_t h) {
    if (img.width() != w || img.height() != h) {
        img = RealImage(w, h);
    }
}

// Same-size convolution of several channels at once, with half-sample
// symmetric extension. `source(c, y, dst)` writes row y of channel c;
// `sink(y, rows)` receives the filtered row y of every channel, channel c at
// rows + c * w. Horizontally filtered rows live in a ring of 2r+1 rows per
// channel. Mirrored taps share one multiply.
template <class Source, class Sink>
void convolve_channels(std::size_t width, std::size_t height, const std::vector<double>& kernel,
                       std::size_t channels, std::vector<double>& ring, std::vector<double>& row,
                       Source&& source, Sink&& sink) {
    g_convolutions += channels;
    const auto w = static_cast<std::ptrdiff_t>(width);
    const auto h = static_cast<std::ptrdiff_t>(height);
    const auto r = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    const auto span = 2 * r + 1;
    const auto ch = static_cast<std::ptrdiff_t>(channels);
    const double centre = kernel[static_cast<std::size_t>(r)];
    ring.resize(static_cast<std::size_t>(ch * span * w));
    row.resize(static_cast<std::size_t>(w + 2 * r + ch * w));
    double* const mid = row.data() + r;
    double* const acc = row.data() + w + 2 * r;

    auto ring_row = [&](std::ptrdiff_t c, std::ptrdiff_t y) {
        return ring.data() + (c * span + y % span) * w;
    };
    auto filter_row = [&](std::ptrdiff_t c, std::ptrdiff_t y) {
        source(static_cast<std::size_t>(c), static_cast<std::size_t>(y), mid);
        for (std::ptrdiff_t i = 0; i < r; ++i) {
            mid[-1 - i] = mid[reflect(-1 - i, w)];
            mid[w + i] = mid[reflect(w + i, w)];
        }
        double* dst = ring_row(c, y);
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            dst[x] = centre * mid[x];
        }
        for (std::ptrdiff_t j = 1; j <= r; ++j) {
            const double weight = kernel[static_cast<std::size_t>(r + j)];
            const double* left = mid - j;
            const double* right = mid + j;
            for (std::ptrdiff_t x = 0; x < w; ++x) {
                dst[x] += weight * (left[x] + right[x]);
            }
        }
    };

    // Output row y reads filtered rows within [y - r, y + r] clipped to the
    // image, since reflection never leaves that range.
    std::ptrdiff_t filtered = 0;
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (; filtered < std::min(h, y + r + 1); ++filtered) {
            for (std::ptrdiff_t c = 0; c < ch; ++c) {
                filter_row(c, filtered);
            }
        }
        for (std::ptrdiff_t c = 0; c < ch; ++c) {
            double* dst = acc + c * w;
            const double* centre_row = ring_row(c, y);
            for (std::ptrdiff_t x = 0; x < w; ++x) {
                dst[x] = centre * centre_row[x];
            }
            for (std::ptrdiff_t j = 1; j <= r; ++j) {
                const double weight = kernel[static_cast<std::size_t>(r + j)];
                const double* up = ring_row(c, static_cast<std::ptrdiff_t>(reflect(y - j, h)));
                const double* down = ring_row(c, static_cast<std::ptrdiff_t>(reflect(y + j, h)));
                for (std::ptrdiff_t x = 0; x < w; ++x) {
                    dst[x] += weight * (up[x] + down[x]);
                }
            }
        }
        sink(static_cast<std::size_t>(y), static_cast<const double*>(acc));
    }
}

// Per-thread buffers reused across calls of the same image size.
struct Workspace {
    SsimFields fields;
    RealImage d_cov, d_var;
    std::vector<double> ring, row;
};

Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
}

enum class Keep { nothing, gradient_inputs, everything };

// One five-channel convolution pass; returns the mean of the SSIM map.
// Keep::gradient_inputs stores m1 and the map's partial derivatives in
// sigma_xy and sigma_y^2, Keep::everything also stores every field.
double fields_into(const RealImage& x, const RealImage& y, const SsimParams& p, Keep keep,
                   Workspace& ws) {
    check_pair(x, y, p);
    const std::vector<double> kernel =
        detail::gaussian_kernel_1d(p.window_size, p.window_sigma);
    SsimFields& f = ws.fields;
    const std::size_t w = x.width();
    const std::size_t h = x.height();
    if (keep != Keep::nothing) {
        for (RealImage* img : {&f.m1, &ws.d_cov, &ws.d_var}) {
            reshape(*img, w, h);
        }
    }
    if (keep == Keep::everything) {
        for (RealImage* img : {&f.mu_x, &f.mu_y, &f.sigma2_x, &f.sigma2_y, &f.sigma_xy,
                               &f.ssim_map, &f.denom}) {
            reshape(*img, w, h);
        }
    }

    auto source = [&](std::size_t c, std::size_t row, double* dst) {
        const double* a = x.values().data() + row * w;
        const double* b = y.values().data() + row * w;
        switch (c) {
            case 0: std::copy(a, a + w, dst); break;
            case 1: std::copy(b, b + w, dst); break;
            case 2: for (std::size_t i = 0; i < w; ++i) dst[i] = a[i] * a[i]; break;
            case 3: for (std::size_t i = 0; i < w; ++i) dst[i] = b[i] * b[i]; break;
            default: for (std::size_t i = 0; i < w; ++i) dst[i] = a[i] * b[i]; break;
        }
    };
    double sum = 0.0;
    auto sink = [&](std::size_t row, const double* rows) {
        const std::size_t base = row * w;
        for (std::size_t i = 0; i < w; ++i) {
            const double mx = rows[i];
            const double my = rows[w + i];
            const double vx = rows[2 * w + i] - mx * mx;
            const double vy = rows[3 * w + i] - my * my;
            const double cxy = rows[4 * w + i] - mx * my;

            const double num_l = 2.0 * mx * my + p.c1;
            const double num_c = 2.0 * cxy + p.c2;
            const double den_l = mx * mx + my * my + p.c1;
            const double den_c = vx + vy + p.c2;
            const double d = den_l * den_c;
            const double s = num_l * num_c / d;
            sum += s;
            if (keep == Keep::nothing) {
                continue;
            }

            const std::size_t k = base + i;
            f.m1[k] = (2.0 * mx * (num_c - num_l) - 2.0 * my * (den_c - den_l) * s) / d;
            ws.d_cov[k] = 2.0 * num_l / d;
            ws.d_var[k] = -s / den_c;
            if (keep == Keep::everything) {
                f.mu_x[k] = mx;
                f.mu_y[k] = my;
                f.sigma2_x[k] = vx;
                f.sigma2_y[k] = vy;
                f.sigma_xy[k] = cxy;
                f.denom[k] = d;
                f.ssim_map[k] = s;
            }
        }
    };
    convolve_channels(w, h, kernel, 5, ws.ring, ws.row, source, sink);
    return sum / static_cast<double>(x.size());
}

// Gradient from the fields in `ws`; one three-channel convolution pass.
RealImage gradient_from_fields(const RealImage& reference, const RealImage& y,
                               const SsimParams& p, Workspace& ws) {
    const std::vector<double> kernel =
        detail::gaussian_kernel_1d(p.window_size, p.window_sigma);
    const std::size_t w = y.width();
    const double inv_m = 1.0 / static_cast<double>(y.size());
    const RealImage* maps[] = {&ws.fields.m1, &ws.d_cov, &ws.d_var};
    RealImage grad(w, y.height());

    auto source = [&](std::size_t c, std::size_t row, double* dst) {
        const double* src = maps[c]->values().data() + row * w;
        std::copy(src, src + w, dst);
    };
    auto sink = [&](std::size_t row, const double* rows) {
        const std::size_t base = row * w;
        for (std::size_t i = 0; i < w; ++i) {
            grad[base + i] = (rows[i] + rows[w + i] * reference[base + i] +
                              2.0 * rows[2 * w + i] * y[base + i]) * inv_m;
        }
    };
    convolve_channels(w, y.height(), kernel, 3, ws.ring, ws.row, source, sink);
    return grad;
}

}  // namespace

SsimParams SsimParams::for_levels(std::uint32_t levels) {
    if (levels < 2) {
        throw InvalidArgument("SSIM needs at least two intensity levels");
    }
    const double range = static_cast<double>(levels - 1);
    SsimParams p;
    p.c1 = (0.01 * range) * (0.01 * range);
    p.c2 = (0.03 * range) * (0.03 * range);
    return p;
}

void SsimParams::validate() const {
    if (window_size == 0 || window_size % 2 == 0) {
        throw InvalidArgument("SSIM window size must be odd and positive");
    }
    if (!(window_sigma > 0.0)) {
        throw InvalidArgument("SSIM window sigma must be positive");
    }
    if (!(c1 > 0.0) || !(c2 > 0.0)) {
        throw InvalidArgument("SSIM constants C1 and C2 must be positive");
    }
}

namespace detail {

std::vector<double> gaussian_kernel_1d(std::size_t size, double sigma) {
    if (size == 0 || size % 2 == 0) {
        throw InvalidArgument("Gaussian window size must be odd and positive, got " +
                              std::to_string(size));
    }
    if (!(sigma > 0.0)) {
        throw InvalidArgument("Gaussian window sigma must be positive");
    }
    const auto r = static_cast<std::ptrdiff_t>(size / 2);
    std::vector<double> k(size);
    for (std::ptrdiff_t i = -r; i <= r; ++i) {
        const auto d = static_cast<double>(i);
        k[static_cast<std::size_t>(i + r)] = std::exp(-d * d / (2.0 * sigma * sigma));
    }
    const double sum = std::accumulate(k.begin(), k.end(), 0.0);
    for (double& v : k) {
        v /= sum;
    }
    return k;
}

RealImage convolve_symmetric(const RealImage& img, const std::vector<double>& kernel) {
    RealImage out(img.width(), img.height());
    std::vector<double> ring, row;
    const std::size_t w = img.width();
    convolve_channels(
        w, img.height(), kernel, 1, ring, row,
        [&](std::size_t, std::size_t y, double* dst) {
            const double* src = img.values().data() + y * w;
            std::copy(src, src + w, dst);
        },
        [&](std::size_t y, const double* rows) {
            std::copy(rows, rows + w, out.values().data() + y * w);
        });
    return out;
}

}  // namespace detail

std::vector<double> gaussian_window(std::size_t size, double sigma) {
    const std::vector<double> k = detail::gaussian_kernel_1d(size, sigma);
    std::vector<double> w(size * size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            w[i * size + j] = k[i] * k[j];
        }
    }
    return w;
}

SsimFields ssim_fields(const RealImage& x, const RealImage& y, const SsimParams& p) {
    Workspace& ws = workspace();
    fields_into(x, y, p, Keep::everything, ws);
    return ws.fields;
}

double ssim_index(const RealImage& x, const RealImage& y, const SsimParams& p) {
    return fields_into(x, y, p, Keep::nothing, workspace());
}

RealImage ssim_gradient(const RealImage& reference, const RealImage& y,
                        const SsimParams& p) {
    Workspace& ws = workspace();
    fields_into(reference, y, p, Keep::gradient_inputs, ws);
    return gradient_from_fields(reference, y, p, ws);
}

SsimWithGradient ssim_with_gradient(const RealImage& reference, const RealImage& y,
                                    const SsimParams& p) {
    Workspace& ws = workspace();
    SsimWithGradient out;
    out.ssim = fields_into(reference, y, p, Keep::gradient_inputs, ws);
    out.gradient = gradient_from_fields(reference, y, p, ws);
    return out;
}

std::uint64_t convolution_count() noexcept { return g_convolutions; }

}  // namespace histspec
