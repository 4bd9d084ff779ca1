#include "histspec/cli/commands.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "histspec/cli/pgm.hpp"
#include "histspec/cli/trace_csv.hpp"
#include "histspec/cli/watermark.hpp"
#include "histspec/errors.hpp"
#include "histspec/histogram.hpp"
#include "histspec/optimizer.hpp"
#include "histspec/ssim.hpp"

namespace histspec::cli {

namespace {

struct AscentOptions {
    double mu = kDefaultMu;
    bool auto_mu = false;
    std::size_t iterations = kDefaultIterations;
    std::string ehs = "classic";
    std::string trace_path;
    double plateau = kDefaultPlateauEpsilon;
    std::optional<double> threshold;
    std::size_t grid_points = kDefaultMuGridPoints;
    long seed = 0;
};

void add_ascent_options(CLI::App& cmd, AscentOptions& o, bool with_auto_mu) {
    cmd.add_option("--mu", o.mu, "Step size (probe step with --auto-mu)")
        ->check(CLI::NonNegativeNumber);
    if (with_auto_mu) {
        cmd.add_flag("--auto-mu", o.auto_mu, "Estimate mu0 and search [0.1 mu0, mu0]");
        cmd.add_option("--grid", o.grid_points, "Candidates for the mu search")
            ->check(CLI::PositiveNumber);
    }
    cmd.add_option("--iters", o.iterations, "Maximum number of iterations")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--ehs", o.ehs, "EHS used for re-projection")
        ->check(CLI::IsMember({"classic", "coltuc"}));
    cmd.add_option("--trace", o.trace_path, "Write the per-iteration trace as CSV");
    cmd.add_option("--plateau", o.plateau, "Stop when |SSIM gain| falls below this (0 disables)")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--threshold", o.threshold, "Stop once SSIM reaches this value");
    cmd.add_option("--seed", o.seed, "Accepted for harness compatibility; unused");
}

AscentConfig to_config(const AscentOptions& o) {
    AscentConfig cfg;
    cfg.mu = o.mu;
    cfg.max_iterations = o.iterations;
    cfg.plateau_epsilon = o.plateau;
    cfg.ssim_threshold = o.threshold;
    cfg.ehs = o.ehs == "coltuc" ? EhsVariant::strict_ordering : EhsVariant::classic;
    return cfg;
}

void print_real(std::ostream& out, const char* key, double value) {
    std::ostringstream s;
    s << std::setprecision(12) << value;
    out << key << '=' << s.str() << '\n';
}

// Runs the ascent (with the optional step-size search), writes the output
// image and trace, and reports the result.
int optimize_and_write(const GrayImage& input, const Histogram& target,
                       const AscentOptions& o, const std::string& output_path,
                       std::ostream& out, std::ostream& err) {
    AscentConfig cfg = to_config(o);
    if (o.auto_mu) {
        const double probe = o.mu > 0.0 ? o.mu : kDefaultMu;
        const StepEstimate est = estimate_mu0(input, target, probe, cfg.ehs);
        if (est.fell_back) {
            err << "step-size model not applicable (" << est.note << "); searching below "
                << probe << '\n';
        }
        print_real(out, "mu0", est.mu0);
        if (est.mu0 > 0.0) {
            const MuSearchResult s = search_mu(input, target, est.mu0, o.grid_points, cfg.ehs);
            cfg.mu = s.mu;
        } else {
            err << "first iteration already reaches SSIM 1; keeping mu = " << probe << '\n';
            cfg.mu = probe;
        }
    }

    const AscentResult result = ascend(input, target, cfg);
    pgm::write_file(output_path, result.image);
    if (!o.trace_path.empty()) {
        trace_csv::write_file(o.trace_path, result.trace);
    }

    print_real(out, "ssim", result.trace.best_ssim);
    print_real(out, "ssim_first", result.trace.records.front().ssim);
    print_real(out, "mu", cfg.mu);
    out << "iterations=" << result.trace.records.size() << '\n';
    out << "best_iteration=" << result.trace.best_iteration << '\n';
    return kOk;
}

std::vector<std::uint64_t> parse_counts(const std::string& text) {
    std::vector<std::uint64_t> counts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size() || item.front() == '-') {
            throw InvalidArgument("counts must be a comma-separated list of non-negative integers");
        }
        counts.push_back(v);
    }
    if (counts.empty()) {
        throw InvalidArgument("counts list is empty");
    }
    return counts;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact histogram specification optimized for SSIM", "histspec"};
    app.require_subcommand(1);

    // specify
    std::string spec_in, spec_out, ref_image;
    bool uniform = false, linear = false;
    AscentOptions spec_opts;
    auto* specify = app.add_subcommand("specify", "Match a target histogram exactly, maximizing SSIM");
    specify->add_option("input", spec_in, "Input PGM")->required();
    specify->add_option("output", spec_out, "Output PGM")->required();
    auto* ref_opt = specify->add_option("--ref-image", ref_image, "Use this image's histogram");
    auto* uni_opt = specify->add_flag("--uniform", uniform, "Flat target (equalization)");
    auto* lin_opt = specify->add_flag("--linear", linear, "Target h_i proportional to i+1");
    ref_opt->excludes(uni_opt)->excludes(lin_opt);
    uni_opt->excludes(lin_opt);
    add_ascent_options(*specify, spec_opts, true);

    // equalize
    std::string eq_in, eq_out;
    AscentOptions eq_opts;
    auto* equalize = app.add_subcommand("equalize", "Exact histogram equalization, maximizing SSIM");
    equalize->add_option("input", eq_in, "Input PGM")->required();
    equalize->add_option("output", eq_out, "Output PGM")->required();
    add_ascent_options(*equalize, eq_opts, true);

    // watermark embed / detect
    auto* wm = app.add_subcommand("watermark", "Histogram-hole watermarking");
    wm->require_subcommand(1);
    std::string wm_in, wm_out, message;
    AscentOptions wm_opts;
    auto* embed = wm->add_subcommand("embed", "Embed a bit string as empty histogram bins");
    embed->add_option("input", wm_in, "Host PGM")->required();
    embed->add_option("output", wm_out, "Marked PGM")->required();
    embed->add_option("--message", message, "Bits, e.g. 10110010")->required();
    add_ascent_options(*embed, wm_opts, false);

    std::string det_in;
    std::size_t det_bits = 0;
    auto* detect = wm->add_subcommand("detect", "Read bits from empty histogram bins");
    detect->add_option("input", det_in, "Marked PGM")->required();
    detect->add_option("--bins", det_bits, "Number of bits to read")->required();

    // metrics
    std::string met_a, met_b;
    auto* metrics = app.add_subcommand("metrics", "SSIM index between two images");
    metrics->add_option("a", met_a, "First PGM")->required();
    metrics->add_option("b", met_b, "Second PGM")->required();

    // count
    std::string count_image, count_list;
    auto* count = app.add_subcommand("count", "Number of images sharing a histogram");
    auto* hist_opt = count->add_option("--histogram-of", count_image, "PGM whose histogram is used");
    auto* counts_opt = count->add_option("--counts", count_list, "Comma-separated bin counts");
    hist_opt->excludes(counts_opt);
    count->require_option(1);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (specify->parsed()) {
            if (ref_image.empty() && !uniform && !linear) {
                err << "specify: one of --ref-image, --uniform, --linear is required\n";
                return kUsage;
            }
            const GrayImage input = pgm::read_file(spec_in);
            Histogram target;
            if (!ref_image.empty()) {
                const GrayImage ref = pgm::read_file(ref_image);
                target = generate_target(TargetKind::from_image, input.levels(), input.size(), &ref);
            } else {
                target = generate_target(uniform ? TargetKind::uniform : TargetKind::linear,
                                         input.levels(), input.size());
            }
            return optimize_and_write(input, target, spec_opts, spec_out, out, err);
        }
        if (equalize->parsed()) {
            const GrayImage input = pgm::read_file(eq_in);
            const Histogram target =
                generate_target(TargetKind::uniform, input.levels(), input.size());
            return optimize_and_write(input, target, eq_opts, eq_out, out, err);
        }
        if (embed->parsed()) {
            const GrayImage host = pgm::read_file(wm_in);
            const AscentResult r = watermark::embed(host, watermark::parse_bits(message),
                                                    to_config(wm_opts));
            pgm::write_file(wm_out, r.image);
            if (!wm_opts.trace_path.empty()) {
                trace_csv::write_file(wm_opts.trace_path, r.trace);
            }
            print_real(out, "ssim", r.trace.best_ssim);
            print_real(out, "ssim_first", r.trace.records.front().ssim);
            out << "bits=" << message.size() << '\n';
            return kOk;
        }
        if (detect->parsed()) {
            const GrayImage marked = pgm::read_file(det_in);
            out << "message=" << watermark::format_bits(watermark::detect(histogram_of(marked), det_bits))
                << '\n';
            return kOk;
        }
        if (metrics->parsed()) {
            const GrayImage a = pgm::read_file(met_a);
            const GrayImage b = pgm::read_file(met_b);
            if (a.levels() != b.levels()) {
                throw DimensionMismatch("images have different maxval");
            }
            print_real(out, "ssim",
                       ssim_index(RealImage::from_gray(a), RealImage::from_gray(b),
                                  SsimParams::for_levels(a.levels())));
            return kOk;
        }
        if (count->parsed()) {
            const Histogram h = count_image.empty()
                                    ? Histogram(parse_counts(count_list))
                                    : histogram_of(pgm::read_file(count_image));
            out << "count=" << count_images_with_histogram(h).get_str() << '\n';
            return kOk;
        }
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kMismatch;
    } catch (const HistogramMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kMismatch;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kCapacity;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace histspec::cli
