#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "histspec/ehs.hpp"
#include "histspec/histogram.hpp"
#include "histspec/image.hpp"
#include "histspec/ssim.hpp"

namespace histspec {

inline constexpr double kDefaultMu = 67.0;
inline constexpr std::size_t kDefaultIterations = 180;
inline constexpr double kDefaultPlateauEpsilon = 1e-5;
inline constexpr std::size_t kDefaultMuGridPoints = 8;
inline constexpr std::size_t kMuSearchIterations = 5;

struct AscentConfig {
    double mu = kDefaultMu;
    std::size_t max_iterations = kDefaultIterations;
    // Stop once SSIM reaches this value.
    std::optional<double> ssim_threshold;
    // Stop once |SSIM(n) - SSIM(n-1)| < plateau_epsilon. Zero disables.
    double plateau_epsilon = kDefaultPlateauEpsilon;
    EhsVariant ehs = EhsVariant::classic;
    // Defaults to SsimParams::for_levels(image levels).
    std::optional<SsimParams> ssim;

    // Throws InvalidArgument unless mu >= 0, max_iterations >= 1,
    // plateau_epsilon >= 0 and the threshold lies in (0, 1].
    void validate() const;
};

// One row per iteration n = 1, 2, ...
//   ssim            SSIM(I, Y(n))
//   predicted_delta estimate of the gain of the step from Y(n-1) to Y(n),
//                   mu * M * sum(grad^2) at Y(n-1); zero for n = 1
//   actual_delta    SSIM(n) - SSIM(n-1); zero for n = 1
//   elapsed_s       wall time since the start of the run
struct TraceRecord {
    std::size_t iteration = 0;
    double ssim = 0.0;
    double predicted_delta = 0.0;
    double actual_delta = 0.0;
    double elapsed_s = 0.0;
};

struct AscentTrace {
    std::vector<TraceRecord> records;
    std::size_t best_iteration = 0;
    double best_ssim = 0.0;
};

struct AscentResult {
    GrayImage image;  // best-so-far iterate
    AscentTrace trace;
};

// SSIM gradient ascent restricted to images with histogram `target`:
//   X <- I; repeat { Y <- EHS(X); stop?; X <- Y + mu * M * grad SSIM(I, Y) }
// X stays real-valued and unclamped. Returns the iterate with the highest
// SSIM against `original`; its histogram equals `target` exactly.
// Throws HistogramMismatch, InvalidArgument, or NumericalError when the
// gradient goes non-finite.
AscentResult ascend(const GrayImage& original, const Histogram& target,
                    const AscentConfig& config);

// First-order SSIM gain of the step X = Y + mu * M * grad:
// mu * M * sum(grad^2).
double predict_delta_ssim(const RealImage& gradient, double mu);

struct StepEstimate {
    double p = 0.0;          // sum of squared gradient components at Y(1)
    double q = 0.0;          // DeltaSSIM(2) / DeltaSSIM(1)
    double ssim_init = 0.0;  // SSIM(I, Y(1))
    double mu0 = 0.0;        // step-size upper bound
    // True when the geometric model did not apply and mu0 = mu_probe.
    bool fell_back = false;
    std::string note;
};

// mu0 = (1 - q)(1 - ssim_init) / (p M).
double mu0_from(double p, double q, double ssim_init, std::size_t pixels);

// Asymptotic SSIM when the per-iteration gain decays geometrically:
// ssim_init + p mu M / (1 - q).
double predicted_final_ssim(double ssim_init, double p, double mu, std::size_t pixels,
                            double q);

// Three-iteration probe run with step mu_probe, fitted to the geometric gain
// model. ssim_init == 1 gives mu0 = 0. A non-positive first gain or q >= 1
// falls back to mu0 = mu_probe (fell_back = true). Throws NumericalError when
// the gradient vanishes while ssim_init < 1.
StepEstimate estimate_mu0(const GrayImage& original, const Histogram& target,
                          double mu_probe = kDefaultMu,
                          EhsVariant ehs = EhsVariant::classic);

struct MuSearchResult {
    double mu = 0.0;
    AscentTrace trace;
    std::vector<double> candidates;
    std::vector<double> scores;  // SSIM after the last probe iteration
};

// Log-spaced candidates in [0.1 mu0, mu0] (the geometric midpoint mu0/sqrt(10)
// when grid_points == 1), each run for `iterations` steps. Returns the
// candidate with the highest final SSIM; ties go to the smaller mu.
MuSearchResult search_mu(const GrayImage& original, const Histogram& target,
                         double mu0, std::size_t grid_points = kDefaultMuGridPoints,
                         EhsVariant ehs = EhsVariant::classic,
                         std::size_t iterations = kMuSearchIterations);

}  // namespace histspec
