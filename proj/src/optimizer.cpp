#include "histspec/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "histspec/errors.hpp"

namespace histspec {

void AscentConfig::validate() const {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw InvalidArgument("step size mu must be finite and non-negative");
    }
    if (max_iterations < 1) {
        throw InvalidArgument("max_iterations must be at least 1");
    }
    if (!(plateau_epsilon >= 0.0)) {
        throw InvalidArgument("plateau epsilon must be non-negative");
    }
    if (ssim_threshold && !(*ssim_threshold > 0.0 && *ssim_threshold <= 1.0)) {
        throw InvalidArgument("SSIM threshold must lie in (0, 1]");
    }
    if (ssim) {
        ssim->validate();
    }
}

AscentResult ascend(const GrayImage& original, const Histogram& target,
                    const AscentConfig& config) {
    config.validate();
    if (target.total() != original.size()) {
        throw HistogramMismatch("target histogram sums to " +
                                std::to_string(target.total()) + ", image has " +
                                std::to_string(original.size()) + " pixels");
    }
    const SsimParams params = config.ssim.value_or(SsimParams::for_levels(original.levels()));
    const RealImage reference = RealImage::from_gray(original);
    const double step = config.mu * static_cast<double>(original.size());

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();

    AscentResult result;
    RealImage x = reference;
    RealImage y_real(original.width(), original.height());
    double previous_ssim = 0.0;
    double previous_prediction = 0.0;

    for (std::size_t n = 1; n <= config.max_iterations; ++n) {
        GrayImage y = exact_histogram_specification(config.ehs, x, target).output;
        for (std::size_t i = 0; i < y_real.size(); ++i) {
            y_real[i] = y.pixels()[i];
        }
        SsimWithGradient sg = ssim_with_gradient(reference, y_real, params);
        if (!std::isfinite(sg.ssim) || !sg.gradient.all_finite()) {
            throw NumericalError("non-finite SSIM or gradient at iteration " +
                                 std::to_string(n));
        }

        TraceRecord rec;
        rec.iteration = n;
        rec.ssim = sg.ssim;
        if (n > 1) {
            rec.predicted_delta = previous_prediction;
            rec.actual_delta = sg.ssim - previous_ssim;
        }
        rec.elapsed_s = std::chrono::duration<double>(clock::now() - start).count();
        result.trace.records.push_back(rec);

        if (n == 1 || sg.ssim > result.trace.best_ssim) {
            result.trace.best_ssim = sg.ssim;
            result.trace.best_iteration = n;
            result.image = std::move(y);
        }

        const bool threshold_hit = config.ssim_threshold && sg.ssim >= *config.ssim_threshold;
        const bool plateau_hit = n > 1 && config.plateau_epsilon > 0.0 &&
                                 std::abs(rec.actual_delta) < config.plateau_epsilon;
        if (threshold_hit || plateau_hit || n == config.max_iterations) {
            break;
        }

        previous_ssim = sg.ssim;
        previous_prediction = predict_delta_ssim(sg.gradient, config.mu);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = y_real[i] + step * sg.gradient[i];
        }
    }
    return result;
}

double predict_delta_ssim(const RealImage& gradient, double mu) {
    double sum_sq = 0.0;
    for (double g : gradient.values()) {
        sum_sq += g * g;
    }
    return mu * static_cast<double>(gradient.size()) * sum_sq;
}

double mu0_from(double p, double q, double ssim_init, std::size_t pixels) {
    return (1.0 - q) * (1.0 - ssim_init) / (p * static_cast<double>(pixels));
}

double predicted_final_ssim(double ssim_init, double p, double mu, std::size_t pixels,
                            double q) {
    return ssim_init + p * mu * static_cast<double>(pixels) / (1.0 - q);
}

StepEstimate estimate_mu0(const GrayImage& original, const Histogram& target,
                          double mu_probe, EhsVariant ehs) {
    if (!(mu_probe > 0.0) || !std::isfinite(mu_probe)) {
        throw InvalidArgument("probe step size must be positive");
    }
    AscentConfig probe;
    probe.mu = mu_probe;
    probe.max_iterations = 3;
    probe.plateau_epsilon = 0.0;
    probe.ehs = ehs;
    const AscentResult run = ascend(original, target, probe);
    const auto& rec = run.trace.records;

    StepEstimate est;
    est.ssim_init = rec.at(0).ssim;
    if (est.ssim_init >= 1.0) {
        est.mu0 = 0.0;
        est.note = "SSIM already 1 at the first iteration";
        return est;
    }

    // p is the squared gradient norm at Y(1); recover it from the first
    // prediction mu * M * p, which the trace stores on row 2.
    const double pixels = static_cast<double>(original.size());
    est.p = rec.at(1).predicted_delta / (mu_probe * pixels);
    if (!(est.p > 0.0)) {
        throw NumericalError("SSIM gradient vanishes at the first iteration while SSIM < 1");
    }

    const double first_gain = rec.at(1).actual_delta;
    const double second_gain = rec.at(2).actual_delta;
    if (!(first_gain > 0.0)) {
        est.q = 0.0;
        est.mu0 = mu_probe;
        est.fell_back = true;
        est.note = "first probe step did not increase SSIM";
        return est;
    }
    est.q = second_gain / first_gain;
    if (est.q >= 1.0) {
        est.mu0 = mu_probe;
        est.fell_back = true;
        est.note = "SSIM gain is not decaying (q >= 1)";
        return est;
    }
    est.mu0 = mu0_from(est.p, est.q, est.ssim_init, original.size());
    return est;
}

MuSearchResult search_mu(const GrayImage& original, const Histogram& target, double mu0,
                         std::size_t grid_points, EhsVariant ehs, std::size_t iterations) {
    if (!(mu0 > 0.0) || !std::isfinite(mu0)) {
        throw InvalidArgument("mu0 must be positive");
    }
    if (grid_points < 1 || iterations < 1) {
        throw InvalidArgument("search needs at least one candidate and one iteration");
    }

    MuSearchResult out;
    if (grid_points == 1) {
        out.candidates.push_back(mu0 / std::sqrt(10.0));
    } else {
        for (std::size_t k = 0; k < grid_points; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(grid_points - 1);
            out.candidates.push_back(0.1 * mu0 * std::pow(10.0, t));
        }
    }

    AscentConfig cfg;
    cfg.max_iterations = iterations;
    cfg.plateau_epsilon = 0.0;
    cfg.ehs = ehs;
    bool have_best = false;
    double best_score = 0.0;
    for (double mu : out.candidates) {
        cfg.mu = mu;
        AscentResult run = ascend(original, target, cfg);
        const double score = run.trace.records.back().ssim;
        out.scores.push_back(score);
        // Candidates ascend in mu, so strict > keeps the smallest on ties.
        if (!have_best || score > best_score) {
            have_best = true;
            best_score = score;
            out.mu = mu;
            out.trace = std::move(run.trace);
        }
    }
    return out;
}

}  // namespace histspec
