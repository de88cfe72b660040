// Command-line front-end: exponent predictions, norm computation, and
// growth experiments with reproducible seeded configuration.

#include "hlsum/errors.hpp"
#include "hlsum/experiments.hpp"
#include "hlsum/form_io.hpp"
#include "hlsum/forms.hpp"
#include "hlsum/norms.hpp"
#include "hlsum/parallel.hpp"
#include "hlsum/rational.hpp"
#include "hlsum/theory.hpp"
#include "hlsum/witnesses.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace hlsum;

std::string decimal(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string rational_line(const Rational& q) {
    return to_string(q) + " (" + decimal(to_double(q)) + ")";
}

int parse_grid_int(std::string_view text, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1) {
        throw std::invalid_argument(std::string("n grid: bad ") + what + " '" + std::string(text) +
                                    "'");
    }
    return value;
}

// "4:128:x2" (geometric, integer factor >= 2) or a comma list "4,8,12".
std::vector<int> parse_n_grid(const std::string& text) {
    std::vector<int> grid;
    if (text.find(':') != std::string::npos) {
        const std::size_t c1 = text.find(':');
        const std::size_t c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos || text.compare(c2 + 1, 1, "x") != 0) {
            throw std::invalid_argument("n grid '" + text +
                                        "' is not start:stop:xFACTOR or a comma list");
        }
        const int start = parse_grid_int(std::string_view(text).substr(0, c1), "start");
        const int stop =
            parse_grid_int(std::string_view(text).substr(c1 + 1, c2 - c1 - 1), "stop");
        const int factor = parse_grid_int(std::string_view(text).substr(c2 + 2), "factor");
        if (factor < 2) throw std::invalid_argument("n grid factor must be >= 2");
        if (stop < start) throw std::invalid_argument("n grid stop must be >= start");
        for (long long n = start; n <= stop; n *= factor) grid.push_back(static_cast<int>(n));
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t comma = std::min(text.find(',', pos), text.size());
            grid.push_back(
                parse_grid_int(std::string_view(text).substr(pos, comma - pos), "entry"));
            pos = comma + 1;
        }
    }
    return grid;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write output file '" + path + "'");
}

void print_report(const ExponentReport& report) {
    std::cout << "lambda = " << rational_line(report.lambda) << "\n";
    std::cout << "regime = " << regime_name(report.regime) << "\n";
    if (report.lambda_alt) {
        std::cout << "lambda_alt = " << rational_line(*report.lambda_alt) << "\n";
    }
    std::cout << "critical_rho = " << rational_line(report.critical_rho) << "\n";
    std::cout << "lower_bound_random_sign = " << rational_line(report.lower_bounds.ksz) << "\n";
    std::cout << "lower_bound_diagonal = " << rational_line(report.lower_bounds.diagonal) << "\n";
    for (const std::string& warning : report.warnings) {
        std::cout << "warning: " << warning << "\n";
    }
}

struct ExperimentFlags {
    std::string family;
    std::string pattern = "1,1";
    std::string p_text;
    std::string r_text = "1";
    std::string n_grid = "4:64:x2";
    int samples = 1;
    std::uint64_t seed = 0;
    std::string norm_method = "automatic";
    std::string out_csv;
    std::string out_json;
    int threads = 0;
};

void add_experiment_flags(CLI::App* sub, ExperimentFlags& flags, const char* family_help) {
    sub->add_option("--family", flags.family, family_help)->required();
    sub->add_option("--pattern", flags.pattern, "block pattern, comma list (e.g. 2,1)");
    sub->add_option("--p", flags.p_text, "domain exponent p (rational or inf)")->required();
    sub->add_option("--r", flags.r_text, "summability exponent r (rational)");
    sub->add_option("--n-grid", flags.n_grid, "dimensions: start:stop:xF (geometric) or comma list");
    sub->add_option("--samples", flags.samples, "independent samples per n");
    sub->add_option("--seed", flags.seed, "base seed; cells derive their own seeds from it");
    sub->add_option("--norm-method", flags.norm_method,
                    "automatic|exact_sup|ascent|analytic|interpolation");
    sub->add_option("--out", flags.out_csv, "write per-sample CSV here");
    sub->add_option("--json", flags.out_json, "write summary JSON here");
    sub->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
}

int finish_experiment(const ExperimentResult& result, const ExperimentFlags& flags) {
    if (!flags.out_csv.empty()) write_text_file(flags.out_csv, to_csv(result));
    if (!flags.out_json.empty()) write_text_file(flags.out_json, summary_json(result).dump(2) + "\n");
    std::cout << "verdict: " << result.verdict << "\n";
    return 0;
}

ExperimentConfig config_from_flags(const ExperimentFlags& flags) {
    ExperimentConfig config;
    config.n_grid = parse_n_grid(flags.n_grid);
    config.samples = flags.samples;
    config.base_seed = flags.seed;
    config.norm_method = parse_norm_method(flags.norm_method);
    return config;
}

int run_lower_cmd(const ExperimentFlags& flags) {
    set_max_threads(flags.threads);
    const BlockPattern pattern = BlockPattern::parse(flags.pattern);
    WitnessFamily family = [&] {
        if (flags.family == "diagonal") return WitnessFamily::diagonal(pattern.k());
        if (flags.family == "ksz") return WitnessFamily::ksz(pattern.k());
        throw std::invalid_argument("unknown witness family '" + flags.family +
                                    "' (expected diagonal or ksz)");
    }();
    const ExperimentResult result =
        run_lower_experiment(family, pattern, parse_exponent(flags.p_text),
                             parse_rational(flags.r_text), config_from_flags(flags));
    return finish_experiment(result, flags);
}

int run_upper_cmd(const ExperimentFlags& flags) {
    set_max_threads(flags.threads);
    const BlockPattern pattern = BlockPattern::parse(flags.pattern);
    SampleDistribution distribution = [&] {
        if (flags.family == "gaussian") return SampleDistribution::gaussian;
        if (flags.family == "sign") return SampleDistribution::sign;
        throw std::invalid_argument("unknown sample distribution '" + flags.family +
                                    "' (expected gaussian or sign)");
    }();
    const ExperimentResult result =
        run_upper_experiment(distribution, pattern, parse_exponent(flags.p_text),
                             parse_rational(flags.r_text), config_from_flags(flags));
    return finish_experiment(result, flags);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"growth of blocked power sums of multilinear forms on l_p balls"};
    app.require_subcommand(1);

    int predict_m = 0, predict_k = 0;
    std::string predict_p, predict_r;
    CLI::App* predict = app.add_subcommand(
        "predict", "predicted growth exponent, regime, and witness lower bounds");
    predict->add_option("--m", predict_m, "total degree m")->required();
    predict->add_option("--k", predict_k, "number of blocks k")->required();
    predict->add_option("--p", predict_p, "domain exponent p (rational or inf)")->required();
    predict->add_option("--r", predict_r, "summability exponent r (rational)")->required();

    int crit_m = 0, crit_k = 0;
    std::string crit_p;
    CLI::App* critical =
        app.add_subcommand("critical", "critical summability exponent rho(m, k, p)");
    critical->add_option("--m", crit_m, "total degree m")->required();
    critical->add_option("--k", crit_k, "number of blocks k")->required();
    critical->add_option("--p", crit_p, "domain exponent p (rational or inf)")->required();

    int classic_m = 0;
    std::string classic_p;
    CLI::App* classical =
        app.add_subcommand("classical", "classical optimal-exponent catalogue at (m, p)");
    classical->add_option("--m", classic_m, "total degree m")->required();
    classical->add_option("--p", classic_p, "domain exponent p (rational or inf)")->required();

    std::string norm_form, norm_p;
    bool norm_exact = false;
    std::string norm_method = "ascent";
    int norm_restarts = 16, norm_threads = 0;
    std::uint64_t norm_seed = 0;
    CLI::App* norm = app.add_subcommand("norm", "operator norm of a form loaded from JSON");
    norm->add_option("--form", norm_form, "form JSON file")->required();
    norm->add_option("--p", norm_p, "domain exponent p (rational or inf)")->required();
    norm->add_flag("--exact", norm_exact, "exhaustive sup-norm (requires p = inf)");
    norm->add_option("--norm-method", norm_method, "ascent|interpolation");
    norm->add_option("--restarts", norm_restarts, "ascent restarts");
    norm->add_option("--seed", norm_seed, "ascent base seed");
    norm->add_option("--threads", norm_threads, "worker threads (0 = all cores)");

    ExperimentFlags lower_flags;
    CLI::App* lower = app.add_subcommand(
        "lower", "witness-family growth experiment with certified ratio lower bounds");
    add_experiment_flags(lower, lower_flags, "witness family: diagonal or ksz");

    ExperimentFlags upper_flags;
    CLI::App* upper = app.add_subcommand(
        "upper", "random-form probe of the growth upper bound");
    add_experiment_flags(upper, upper_flags, "sample distribution: gaussian or sign");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (predict->parsed()) {
            const ExponentReport report = predicted_lambda(
                {predict_m, predict_k, parse_exponent(predict_p), parse_rational(predict_r)});
            print_report(report);
            return 0;
        }
        if (critical->parsed()) {
            const Rational rho = critical_rho(crit_m, crit_k, parse_exponent(crit_p));
            std::cout << "critical_rho = " << rational_line(rho) << "\n";
            return 0;
        }
        if (classical->parsed()) {
            for (const ClassicalEntry& entry :
                 classical_exponents(classic_m, parse_exponent(classic_p))) {
                std::cout << entry.name << " [" << entry.setting << "]: ";
                if (entry.applicable) {
                    std::cout << rational_line(entry.exponent);
                    if (!entry.note.empty()) std::cout << "  -- " << entry.note;
                } else {
                    std::cout << "not applicable  -- " << entry.note;
                }
                std::cout << "\n";
            }
            return 0;
        }
        if (norm->parsed()) {
            set_max_threads(norm_threads);
            const MultilinearForm form = load_form(norm_form);
            const ExtendedExponent p = parse_exponent(norm_p);
            NormEstimate estimate = [&] {
                if (norm_exact) {
                    if (!p.is_infinite()) {
                        throw std::domain_error("--exact computes sup-norms; it requires p = inf");
                    }
                    return exact_norm_sup(form);
                }
                if (norm_method == "interpolation") return interpolation_upper_bound(form, p);
                if (norm_method == "ascent") {
                    AscentConfig config;
                    config.restarts = norm_restarts;
                    config.seed = norm_seed;
                    const std::vector<ExtendedExponent> exponents(
                        static_cast<std::size_t>(form.degree()), p);
                    return estimate_norm(form, exponents, config);
                }
                throw std::invalid_argument("norm method '" + norm_method +
                                            "' (expected ascent or interpolation; use --exact "
                                            "for the exhaustive sup-norm)");
            }();
            std::printf("norm = %.12g (%s)\n", estimate.value, norm_kind_name(estimate.kind));
            return 0;
        }
        if (lower->parsed()) return run_lower_cmd(lower_flags);
        if (upper->parsed()) return run_upper_cmd(upper_flags);
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
