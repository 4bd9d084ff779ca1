#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "histspec/errors.hpp"
#include "histspec/histogram.hpp"
#include "test_support.hpp"

namespace histspec {
namespace {

using Counts = std::vector<std::uint64_t>;

TEST(GrayImage, RejectsOutOfRangeSamples) {
    EXPECT_THROW(GrayImage(2, 1, 4, std::vector<Intensity>{0, 4}), InvalidArgument);
    EXPECT_THROW(GrayImage(2, 2, 4, std::vector<Intensity>{0, 1, 2}), InvalidArgument);
    GrayImage img(2, 2, 4);
    EXPECT_THROW(img.set(0, 0, 7), InvalidArgument);
}

TEST(HistogramOf, CountsSmallImage) {
    const GrayImage img(2, 2, 4, {0, 0, 1, 3});
    EXPECT_EQ(histogram_of(img), Histogram(Counts{2, 1, 0, 1}));
}

TEST(HistogramOf, ConstantImage) {
    const GrayImage img(3, 3, 256);
    const Histogram h = histogram_of(img);
    EXPECT_EQ(h.levels(), 256u);
    EXPECT_EQ(h[0], 9u);
    EXPECT_EQ(h.total(), 9u);
}

TEST(HistogramOf, AgreesWithIndependentRecount) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        const GrayImage img = testing::random_gray(rng, 5 + t, 3 + 2 * t, t % 2 ? 16 : 256);
        const Histogram h = histogram_of(img);
        EXPECT_EQ(Counts(h.counts().begin(), h.counts().end()), testing::recount(img));
        EXPECT_EQ(h.total(), img.width() * img.height());
    }
}

TEST(RescaleHistogram, Examples) {
    EXPECT_EQ(rescale_histogram(Histogram(Counts{1, 1, 1, 1}), 8), Histogram(Counts{2, 2, 2, 2}));
    EXPECT_EQ(rescale_histogram(Histogram(Counts{1, 2}), 4), Histogram(Counts{1, 3}));
    // Equal remainders: the lower bin wins.
    EXPECT_EQ(rescale_histogram(Histogram(Counts{3, 1}), 2), Histogram(Counts{2, 0}));
}

TEST(RescaleHistogram, Errors) {
    EXPECT_THROW(rescale_histogram(Histogram(Counts{0, 0}), 4), InvalidArgument);
    EXPECT_THROW(rescale_histogram(Histogram(Counts{1, 0}), 0), InvalidArgument);
}

TEST(RescaleHistogram, PropertySumExactAndEmptyBinsStayEmpty) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> total(1, 100000);
    for (int t = 0; t < 500; ++t) {
        const std::size_t levels = 1 + t % 300;
        Histogram h = testing::random_histogram(rng, levels, 1 + rng() % 5000);
        const std::uint64_t m = total(rng);
        const Histogram out = rescale_histogram(h, m);
        ASSERT_EQ(out.total(), m);
        for (std::size_t i = 0; i < levels; ++i) {
            if (h[i] == 0) {
                ASSERT_EQ(out[i], 0u);
            }
            // Each bin is within one unit of its exact quota.
            const double quota = static_cast<double>(h[i]) * m / static_cast<double>(h.total());
            ASSERT_LT(std::abs(static_cast<double>(out[i]) - quota), 1.0 + 1e-9);
        }
    }
}

TEST(GenerateTarget, Examples) {
    EXPECT_EQ(generate_target(TargetKind::uniform, 4, 8), Histogram(Counts{2, 2, 2, 2}));
    EXPECT_EQ(generate_target(TargetKind::linear, 3, 6), Histogram(Counts{1, 2, 3}));
    const GrayImage cam = testing::camera256();
    const Histogram h = generate_target(TargetKind::from_image, 256, 65536, &cam);
    EXPECT_EQ(h.total(), 65536u);
    EXPECT_EQ(h, histogram_of(cam));
    const Histogram half = generate_target(TargetKind::from_image, 256, 1000, &cam);
    EXPECT_EQ(half.total(), 1000u);
}

TEST(GenerateTarget, FromImageNeedsMatchingSource) {
    EXPECT_THROW(generate_target(TargetKind::from_image, 4, 8), InvalidArgument);
    const GrayImage img(2, 2, 16);
    EXPECT_THROW(generate_target(TargetKind::from_image, 4, 8, &img), DimensionMismatch);
}

TEST(CountImages, Examples) {
    EXPECT_EQ(count_images_with_histogram(Histogram(Counts{1, 1})), 2);
    EXPECT_EQ(count_images_with_histogram(Histogram(Counts{2, 1})), 3);
    EXPECT_EQ(count_images_with_histogram(Histogram(Counts{2, 2})), 6);
    EXPECT_EQ(count_images_with_histogram(Histogram(Counts{2, 1, 1})), 12);
    EXPECT_THROW(count_images_with_histogram(Histogram(Counts{0, 0})), InvalidArgument);
}

TEST(CountImages, MatchesEnumeration) {
    for (std::size_t levels = 1; levels <= 4; ++levels) {
        for (std::size_t pixels = 1; pixels <= 8; ++pixels) {
            for (const auto& [h, n] : testing::enumerate_histograms(levels, pixels)) {
                ASSERT_EQ(count_images_with_histogram(Histogram(h)), n)
                    << "L=" << levels << " M=" << pixels;
            }
        }
    }
}

TEST(CountImages, LargeImageIsExact) {
    // 64x64, 256 levels, 16 pixels per level: 4096! / (16!)^256.
    const Histogram h(Counts(256, 16));
    const mpz_class c = count_images_with_histogram(h);
    mpz_class check = c;
    mpz_class f16;
    mpz_fac_ui(f16.get_mpz_t(), 16);
    for (int i = 0; i < 256; ++i) {
        check *= f16;
    }
    mpz_class f4096;
    mpz_fac_ui(f4096.get_mpz_t(), 4096);
    EXPECT_EQ(check, f4096);
    EXPECT_GT(c.get_str().size(), 9000u);
}

}  // namespace
}  // namespace histspec
