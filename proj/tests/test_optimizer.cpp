#include <gtest/gtest.h>

#include <random>

#include "histspec/errors.hpp"
#include "histspec/optimizer.hpp"
#include "test_support.hpp"

namespace histspec {
namespace {

AscentConfig fixed_run(double mu, std::size_t iterations) {
    AscentConfig cfg;
    cfg.mu = mu;
    cfg.max_iterations = iterations;
    cfg.plateau_epsilon = 0.0;
    return cfg;
}

TEST(AscentConfig, Validation) {
    AscentConfig cfg;
    cfg.mu = -1.0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = AscentConfig{};
    cfg.max_iterations = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = AscentConfig{};
    cfg.ssim_threshold = 1.5;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Ascend, ZeroStepIsFixedPoint) {
    std::mt19937_64 rng(1);
    const GrayImage img = testing::smooth_gray(rng, 32, 32, 256);
    const Histogram h = generate_target(TargetKind::uniform, 256, img.size());
    const AscentResult r = ascend(img, h, fixed_run(0.0, 6));
    ASSERT_EQ(r.trace.records.size(), 6u);
    EXPECT_EQ(r.image, classic_ehs(img, h).output);
    for (const TraceRecord& rec : r.trace.records) {
        EXPECT_EQ(rec.ssim, r.trace.records.front().ssim);
    }
    EXPECT_EQ(r.trace.best_iteration, 1u);
}

TEST(Ascend, OwnHistogramReturnsInput) {
    std::mt19937_64 rng(2);
    const GrayImage img = testing::smooth_gray(rng, 24, 20, 256);
    AscentConfig cfg;
    cfg.mu = 67.0;
    const AscentResult r = ascend(img, histogram_of(img), cfg);
    EXPECT_EQ(r.image, img);
    EXPECT_DOUBLE_EQ(r.trace.records.front().ssim, 1.0);
    EXPECT_EQ(r.trace.best_iteration, 1u);
}

TEST(Ascend, Errors) {
    const GrayImage img(16, 16, 256);
    EXPECT_THROW(ascend(img, Histogram(std::vector<std::uint64_t>(256, 2)), AscentConfig{}),
                 HistogramMismatch);
    AscentConfig bad;
    bad.max_iterations = 0;
    EXPECT_THROW(ascend(img, histogram_of(img), bad), InvalidArgument);
}

TEST(Ascend, TraceShapeAndBestSoFar) {
    const GrayImage cam = testing::camera256();
    const Histogram h = generate_target(TargetKind::linear, 256, cam.size());
    const AscentResult r = ascend(cam, h, fixed_run(67.0, 15));
    const auto& recs = r.trace.records;
    ASSERT_EQ(recs.size(), 15u);
    double best = -2.0;
    for (std::size_t n = 0; n < recs.size(); ++n) {
        EXPECT_EQ(recs[n].iteration, n + 1);
        EXPECT_GT(recs[n].ssim, -1.0);
        EXPECT_LE(recs[n].ssim, 1.0);
        if (n > 0) {
            EXPECT_DOUBLE_EQ(recs[n].actual_delta, recs[n].ssim - recs[n - 1].ssim);
            EXPECT_GT(recs[n].predicted_delta, 0.0);
            EXPECT_GE(recs[n].elapsed_s, recs[n - 1].elapsed_s);
        }
        best = std::max(best, recs[n].ssim);
    }
    EXPECT_EQ(r.trace.best_ssim, best);
    EXPECT_EQ(recs[r.trace.best_iteration - 1].ssim, best);
    EXPECT_EQ(histogram_of(r.image), h);
    const double check = ssim_index(RealImage::from_gray(cam), RealImage::from_gray(r.image),
                                    SsimParams::for_levels(256));
    EXPECT_DOUBLE_EQ(check, best);
    EXPECT_GT(best, recs.front().ssim);
}

TEST(Ascend, StoppingRules) {
    const GrayImage cam = testing::camera256();
    const Histogram h = generate_target(TargetKind::uniform, 256, cam.size());

    AscentConfig threshold = fixed_run(67.0, 50);
    threshold.ssim_threshold = 0.85;
    const AscentResult a = ascend(cam, h, threshold);
    EXPECT_GE(a.trace.records.back().ssim, 0.85);
    EXPECT_LT(a.trace.records.size(), 50u);
    for (std::size_t n = 0; n + 1 < a.trace.records.size(); ++n) {
        EXPECT_LT(a.trace.records[n].ssim, 0.85);
    }

    AscentConfig plateau = fixed_run(67.0, 400);
    plateau.plateau_epsilon = 1e-4;
    const AscentResult b = ascend(cam, h, plateau);
    EXPECT_LT(b.trace.records.size(), 400u);
    EXPECT_LT(std::abs(b.trace.records.back().actual_delta), 1e-4);
}

TEST(Ascend, StrictOrderingVariant) {
    const GrayImage cam = testing::camera256();
    const Histogram h = generate_target(TargetKind::uniform, 256, cam.size());
    AscentConfig cfg = fixed_run(67.0, 5);
    cfg.ehs = EhsVariant::strict_ordering;
    const AscentResult r = ascend(cam, h, cfg);
    EXPECT_EQ(histogram_of(r.image), h);
    EXPECT_EQ(r.trace.records.front().ssim,
              ssim_index(RealImage::from_gray(cam),
                         RealImage::from_gray(strict_ordering_ehs(cam, h).output),
                         SsimParams::for_levels(256)));
    EXPECT_GT(r.trace.best_ssim, r.trace.records.front().ssim);
}

TEST(Ascend, Deterministic) {
    std::mt19937_64 rng(3);
    const GrayImage img = testing::smooth_gray(rng, 48, 40, 256);
    const Histogram h = generate_target(TargetKind::linear, 256, img.size());
    const AscentResult a = ascend(img, h, fixed_run(67.0, 10));
    const AscentResult b = ascend(img, h, fixed_run(67.0, 10));
    EXPECT_EQ(a.image, b.image);
    ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
    for (std::size_t n = 0; n < a.trace.records.size(); ++n) {
        EXPECT_EQ(a.trace.records[n].ssim, b.trace.records[n].ssim);
        EXPECT_EQ(a.trace.records[n].predicted_delta, b.trace.records[n].predicted_delta);
    }
}

TEST(Ascend, StepSizeIndependentOfResolution) {
    // Same smooth pattern rendered at 64x64 and 128x128.
    auto render = [](std::size_t n) {
        std::vector<Intensity> v(n * n);
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t x = 0; x < n; ++x) {
                const double u = static_cast<double>(x) / n, w = static_cast<double>(y) / n;
                const double f = 0.5 + 0.3 * std::sin(6.0 * u) * std::cos(4.0 * w) +
                                 0.15 * std::cos(9.0 * u * w);
                v[y * n + x] = static_cast<Intensity>(std::lround(std::clamp(f, 0.0, 1.0) * 255));
            }
        }
        return GrayImage(n, n, 256, std::move(v));
    };
    const GrayImage small = render(64), large = render(128);
    const AscentResult a =
        ascend(small, generate_target(TargetKind::uniform, 256, small.size()), fixed_run(67.0, 10));
    const AscentResult b =
        ascend(large, generate_target(TargetKind::uniform, 256, large.size()), fixed_run(67.0, 10));
    for (std::size_t n = 0; n < 10; ++n) {
        EXPECT_NEAR(a.trace.records[n].ssim, b.trace.records[n].ssim, 0.05) << "iteration " << n + 1;
    }
}

TEST(PredictDeltaSsim, Examples) {
    EXPECT_EQ(predict_delta_ssim(RealImage(8, 8, 0.0), 67.0), 0.0);
    const double g = 3e-4, mu = 2.5;
    const RealImage grad(10, 6, g);
    const double m = 60.0;
    EXPECT_NEAR(predict_delta_ssim(grad, mu), mu * m * m * g * g, 1e-15);
}

TEST(PredictDeltaSsim, FirstOrderForSmallSteps) {
    std::mt19937_64 rng(4);
    const SsimParams p = SsimParams::for_levels(256);
    for (int t = 0; t < 5; ++t) {
        const GrayImage img = testing::smooth_gray(rng, 40, 40, 256);
        const RealImage ref = RealImage::from_gray(img);
        const RealImage y = RealImage::from_gray(
            classic_ehs(img, generate_target(TargetKind::uniform, 256, img.size())).output);
        const SsimWithGradient sg = ssim_with_gradient(ref, y, p);
        const double mu = 0.5;
        RealImage x = y;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += mu * x.size() * sg.gradient[i];
        const double actual = ssim_index(ref, x, p) - sg.ssim;
        const double predicted = predict_delta_ssim(sg.gradient, mu);
        EXPECT_LT(std::abs(predicted - actual) / actual, 0.1);
    }
}

TEST(StepEstimate, ClosedForms) {
    EXPECT_NEAR(mu0_from(1e-6, 0.9, 0.8, 65536), 0.30517578125, 1e-12);
    EXPECT_EQ(mu0_from(1e-6, 0.9, 1.0, 65536), 0.0);

    // Geometric gains mu p M q^(n-1), summed directly.
    const double p = 2e-8, mu = 30.0, q = 0.5, init = 0.7;
    const std::size_t m = 4096;
    double total = init, gain = mu * p * m;
    for (int n = 0; n < 200; ++n) {
        total += gain;
        gain *= q;
    }
    EXPECT_NEAR(predicted_final_ssim(init, p, mu, m, q), total, 1e-14);
    EXPECT_NEAR(predicted_final_ssim(init, p, mu, m, q) - init, 2.0 * mu * p * m, 1e-14);
}

TEST(EstimateMu0, MatchesProbeRun) {
    const GrayImage cam = testing::camera256();
    const Histogram h = generate_target(TargetKind::linear, 256, cam.size());
    const StepEstimate est = estimate_mu0(cam, h, 67.0);
    const AscentResult probe = ascend(cam, h, fixed_run(67.0, 3));
    const auto& r = probe.trace.records;

    const RealImage g = ssim_gradient(RealImage::from_gray(cam),
                                      RealImage::from_gray(classic_ehs(cam, h).output),
                                      SsimParams::for_levels(256));
    double p = 0.0;
    for (double v : g.values()) p += v * v;

    EXPECT_NEAR(est.p, p, 1e-12 * p);
    EXPECT_DOUBLE_EQ(est.ssim_init, r[0].ssim);
    EXPECT_DOUBLE_EQ(est.q, (r[2].ssim - r[1].ssim) / (r[1].ssim - r[0].ssim));
    EXPECT_FALSE(est.fell_back);
    EXPECT_NEAR(est.mu0, mu0_from(p, est.q, est.ssim_init, cam.size()), 1e-9 * est.mu0);
    EXPECT_GT(est.mu0, 0.0);
}

TEST(EstimateMu0, PerfectStartGivesZero) {
    std::mt19937_64 rng(5);
    const GrayImage img = testing::smooth_gray(rng, 32, 32, 256);
    const StepEstimate est = estimate_mu0(img, histogram_of(img), 67.0);
    EXPECT_EQ(est.mu0, 0.0);
    EXPECT_EQ(est.ssim_init, 1.0);
    EXPECT_THROW(estimate_mu0(img, histogram_of(img), 0.0), InvalidArgument);
}

TEST(EstimateMu0, FallsBackWhenFirstStepDoesNotHelp) {
    // A huge probe step overshoots, so SSIM drops after the first step.
    const GrayImage cam = testing::camera256();
    const Histogram h = generate_target(TargetKind::linear, 256, cam.size());
    const StepEstimate est = estimate_mu0(cam, h, 1e6);
    EXPECT_TRUE(est.fell_back);
    EXPECT_EQ(est.mu0, 1e6);
}

TEST(SearchMu, SingleCandidateIsGeometricMidpoint) {
    std::mt19937_64 rng(6);
    const GrayImage img = testing::smooth_gray(rng, 32, 32, 256);
    const Histogram h = generate_target(TargetKind::uniform, 256, img.size());
    const MuSearchResult r = search_mu(img, h, 100.0, 1);
    ASSERT_EQ(r.candidates.size(), 1u);
    EXPECT_NEAR(r.mu, 100.0 / std::sqrt(10.0), 1e-12);
    EXPECT_EQ(r.trace.records.size(), kMuSearchIterations);
}

TEST(SearchMu, GridAndTieBreak) {
    // Own histogram: SSIM is 1 for every step size, so the smallest wins.
    std::mt19937_64 rng(7);
    const GrayImage img = testing::smooth_gray(rng, 32, 32, 256);
    const MuSearchResult r = search_mu(img, histogram_of(img), 50.0, 4);
    ASSERT_EQ(r.candidates.size(), 4u);
    EXPECT_NEAR(r.candidates.front(), 5.0, 1e-12);
    EXPECT_NEAR(r.candidates.back(), 50.0, 1e-12);
    EXPECT_NEAR(r.candidates[1] / r.candidates[0], r.candidates[2] / r.candidates[1], 1e-12);
    EXPECT_EQ(r.mu, r.candidates.front());
    EXPECT_THROW(search_mu(img, histogram_of(img), 0.0, 4), InvalidArgument);
}

TEST(SearchMu, CloseToFineGridOptimum) {
    const GrayImage cam = testing::camera256();
    const Histogram h = generate_target(TargetKind::linear, 256, cam.size());
    const StepEstimate est = estimate_mu0(cam, h);
    const MuSearchResult coarse = search_mu(cam, h, est.mu0, kDefaultMuGridPoints);
    const MuSearchResult fine = search_mu(cam, h, est.mu0, 10 * kDefaultMuGridPoints);
    const double best_fine = *std::max_element(fine.scores.begin(), fine.scores.end());
    EXPECT_GE(coarse.trace.records.back().ssim, 0.99 * best_fine);
    EXPECT_GE(coarse.trace.records.back().ssim, coarse.trace.records.front().ssim);
}

}  // namespace
}  // namespace histspec
