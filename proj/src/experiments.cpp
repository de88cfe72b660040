#include "hlsum/experiments.hpp"

#include "hlsum/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

namespace hlsum {

const char* norm_method_name(NormMethod method) {
    switch (method) {
        case NormMethod::automatic: return "automatic";
        case NormMethod::exact_sup: return "exact_sup";
        case NormMethod::ascent: return "ascent";
        case NormMethod::analytic: return "analytic";
        case NormMethod::interpolation: return "interpolation";
    }
    return "unknown";
}

NormMethod parse_norm_method(const std::string& text) {
    if (text == "automatic" || text == "auto") return NormMethod::automatic;
    if (text == "exact_sup") return NormMethod::exact_sup;
    if (text == "ascent") return NormMethod::ascent;
    if (text == "analytic") return NormMethod::analytic;
    if (text == "interpolation") return NormMethod::interpolation;
    throw std::invalid_argument("unknown norm method '" + text +
                                "' (expected automatic, exact_sup, ascent, analytic, or "
                                "interpolation)");
}

const char* certified_direction_name(CertifiedDirection direction) {
    switch (direction) {
        case CertifiedDirection::ratio_is_lower_bound: return "ratio_is_lower_bound";
        case CertifiedDirection::ratio_is_upper_bound: return "ratio_is_upper_bound";
        case CertifiedDirection::heuristic: return "heuristic";
    }
    return "unknown";
}

const char* sample_distribution_name(SampleDistribution distribution) {
    switch (distribution) {
        case SampleDistribution::gaussian: return "gaussian";
        case SampleDistribution::sign: return "sign";
    }
    return "unknown";
}

FitResult fit_loglog(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) {
        throw std::domain_error("log-log fit needs at least 3 points, got " +
                                std::to_string(points.size()));
    }
    double previous_n = 0.0;
    for (const auto& [n, value] : points) {
        if (!(n > previous_n)) throw std::domain_error("log-log fit needs strictly increasing n");
        if (!(value > 0.0)) throw std::domain_error("log-log fit needs positive values");
        previous_n = n;
    }
    const double count = static_cast<double>(points.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [n, value] : points) {
        mean_x += std::log(n);
        mean_y += std::log(value);
    }
    mean_x /= count;
    mean_y /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [n, value] : points) {
        const double dx = std::log(n) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log(value) - mean_y);
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.constant = std::exp(mean_y - fit.slope * mean_x);
    return fit;
}

namespace {

void validate_config(const ExperimentConfig& config) {
    if (config.n_grid.size() < 3) {
        throw std::domain_error("experiment n grid needs at least 3 entries for fitting, got " +
                                std::to_string(config.n_grid.size()));
    }
    int previous = 0;
    for (int n : config.n_grid) {
        if (n <= previous) throw std::domain_error("experiment n grid must be strictly increasing");
        previous = n;
    }
    if (config.samples < 1) throw std::domain_error("experiment needs samples >= 1");
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t count = values.size();
    if (count % 2 == 1) return values[count / 2];
    return 0.5 * (values[count / 2 - 1] + values[count / 2]);
}

// Direction of the computed quotient relative to the true quotient
// lhs / ||T||: dividing by an over-estimate of the norm under-estimates the
// ratio, dividing by an under-estimate over-estimates it.
CertifiedDirection sample_direction(NormKind kind) {
    return kind == NormKind::lower_bound ? CertifiedDirection::ratio_is_upper_bound
                                         : CertifiedDirection::ratio_is_lower_bound;
}

struct NormOutcome {
    double value = 0.0;
    NormKind kind = NormKind::exact;
};

void summarize_and_fit(ExperimentResult& result) {
    const auto& grid = result.config.n_grid;
    const int samples = result.config.samples;
    result.per_n.clear();
    std::vector<std::pair<double, double>> fit_points;
    for (std::size_t ni = 0; ni < grid.size(); ++ni) {
        std::vector<double> lhs, norm, ratio;
        for (int si = 0; si < samples; ++si) {
            const GrowthSample& g = result.samples[ni * static_cast<std::size_t>(samples) +
                                                   static_cast<std::size_t>(si)];
            lhs.push_back(g.lhs);
            norm.push_back(g.norm);
            ratio.push_back(g.ratio);
        }
        PerNSummary summary;
        summary.n = grid[ni];
        summary.median_lhs = median_of(lhs);
        summary.median_norm = median_of(norm);
        summary.median_ratio = median_of(std::vector<double>(ratio));
        summary.min_ratio = *std::min_element(ratio.begin(), ratio.end());
        summary.max_ratio = *std::max_element(ratio.begin(), ratio.end());
        result.per_n.push_back(summary);
        fit_points.emplace_back(static_cast<double>(summary.n), summary.median_ratio);
    }
    const FitResult fit = fit_loglog(fit_points);
    result.fitted_slope = fit.slope;
    result.fitted_constant = fit.constant;

    CertifiedDirection direction = result.samples.front().direction;
    for (const GrowthSample& g : result.samples) {
        if (g.direction != direction) direction = CertifiedDirection::heuristic;
    }
    result.direction = direction;
}

// max over n of (max_ratio / n^lambda) divided by the min; the growth bound
// predicts this stays O(1) across the grid
double stability_factor(const ExperimentResult& result) {
    const double lambda = to_double(result.predicted.lambda);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const PerNSummary& s : result.per_n) {
        const double normalized = s.max_ratio / std::pow(static_cast<double>(s.n), lambda);
        lo = std::min(lo, normalized);
        hi = std::max(hi, normalized);
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

std::string make_verdict(const ExperimentResult& result, double tolerance,
                         const std::string& extra) {
    const double predicted = to_double(result.predicted.lambda);
    const double diff = std::abs(result.fitted_slope - predicted);
    char buf[256];
    std::snprintf(buf, sizeof buf, "slope %.6f vs predicted %s (diff %.6f, tolerance %g: %s)",
                  result.fitted_slope, to_string(result.predicted.lambda).c_str(), diff,
                  tolerance, diff <= tolerance ? "within" : "outside");
    std::string verdict = buf;
    verdict += "; direction ";
    verdict += certified_direction_name(result.direction);
    if (!extra.empty()) {
        verdict += "; ";
        verdict += extra;
    }
    for (const std::string& warning : result.predicted.warnings) {
        verdict += "; warning: ";
        verdict += warning;
    }
    return verdict;
}

// cells may only throw before the parallel region; inside it, failures are
// captured and rethrown afterwards so OpenMP never sees an exception
template <typename CellFn>
void run_cells(const ExperimentConfig& config, std::vector<GrowthSample>& out, CellFn&& cell_fn) {
    const std::int64_t cells =
        static_cast<std::int64_t>(config.n_grid.size()) * config.samples;
    out.assign(static_cast<std::size_t>(cells), GrowthSample{});
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        try {
            const int ni = static_cast<int>(cell / config.samples);
            const int si = static_cast<int>(cell % config.samples);
            out[static_cast<std::size_t>(cell)] = cell_fn(config.n_grid[static_cast<std::size_t>(ni)], si);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

ExperimentResult run_lower_experiment(const WitnessFamily& family, const BlockPattern& pattern,
                                      const ExtendedExponent& p, const Rational& r,
                                      const ExperimentConfig& config) {
    validate_config(config);
    if (!(r > 0)) throw std::domain_error("exponent r must be positive");
    if (family.tag() != WitnessFamily::Tag::lifted && family.k() != pattern.k()) {
        throw std::domain_error("witness family has k = " + std::to_string(family.k()) +
                                " but the pattern has k = " + std::to_string(pattern.k()));
    }
    const int m = pattern.m();
    const int k = pattern.k();
    const std::vector<ExtendedExponent> duals = block_duals(pattern, p);

    ExperimentResult result{
        .kind = "lower",
        .family = family.name(),
        .pattern = pattern,
        .p = p,
        .r = r,
        .config = config,
    };
    result.predicted = predicted_lambda({m, k, p, r});

    NormMethod method = config.norm_method;
    const int n_max = config.n_grid.back();
    if (method == NormMethod::automatic) {
        if (family.tag() == WitnessFamily::Tag::diagonal) {
            method = NormMethod::analytic;
        } else if (p.is_infinite() &&
                   static_cast<std::int64_t>(n_max) * (k - 1) <= 24) {
            method = NormMethod::exact_sup;
        } else {
            method = NormMethod::ascent;
        }
    }
    result.resolved_method = method;

    if (method == NormMethod::analytic && family.tag() != WitnessFamily::Tag::diagonal) {
        throw std::domain_error("analytic norms are exact for the diagonal family only");
    }
    if (method == NormMethod::exact_sup && !p.is_infinite()) {
        throw std::domain_error("exact sup norms require p = inf");
    }
    if (method == NormMethod::interpolation && m != 2) {
        throw std::domain_error("interpolation norms need a bilinear lift (pattern degree 2)");
    }
    if (family.tag() == WitnessFamily::Tag::ksz) {
        ksz_norm_exponent(k, duals);  // validates every 1/r_j <= 1/2
    }

    const double r_d = to_double(r);
    const std::vector<ExtendedExponent> ascent_exponents(static_cast<std::size_t>(m), p);

    run_cells(config, result.samples, [&](int n, int si) {
        const std::uint64_t cell_seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(n),
                                                    static_cast<std::uint64_t>(si), family.name());
        const MultilinearForm core = family.make(n, cell_seed);
        const MultilinearForm lifted = lift_kform(core, pattern);
        const double lhs = blocked_power_sum(lifted, pattern, r_d);

        NormOutcome norm;
        switch (method) {
            case NormMethod::analytic:
                norm = {diagonal_norm_analytic(k, duals, n), NormKind::exact};
                break;
            case NormMethod::exact_sup: {
                // the norm of the k-linear core bounds the norm of its lift,
                // and equals it when every block is a singleton
                const NormEstimate est = exact_norm_sup(core);
                norm = {est.value, k == m ? NormKind::exact : NormKind::upper_bound};
                break;
            }
            case NormMethod::ascent: {
                AscentConfig ascent = config.ascent;
                ascent.seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(si), "ascent");
                const NormEstimate est = estimate_norm(lifted, ascent_exponents, ascent);
                norm = {est.value, est.kind};
                break;
            }
            case NormMethod::interpolation: {
                const NormEstimate est = interpolation_upper_bound(lifted, p);
                norm = {est.value, est.kind};
                break;
            }
            case NormMethod::automatic:
                throw std::logic_error("norm method left unresolved");
        }
        if (!(norm.value > 0.0)) {
            throw std::runtime_error("norm value collapsed to zero; cannot form quotients");
        }

        GrowthSample g;
        g.n = n;
        g.sample = si;
        g.lhs = lhs;
        g.norm = norm.value;
        g.norm_kind = norm.kind;
        g.ratio = lhs / norm.value;
        g.direction = sample_direction(norm.kind);
        return g;
    });

    summarize_and_fit(result);
    if (result.direction == CertifiedDirection::ratio_is_upper_bound) {
        // quotients that over-estimate the true quotient cannot certify a
        // growth lower bound; the fitted slope is only indicative
        result.direction = CertifiedDirection::heuristic;
    }
    const double tolerance = method == NormMethod::analytic ? 1e-6 : 0.2;
    result.verdict = make_verdict(result, tolerance, "");
    return result;
}

ExperimentResult run_upper_experiment(SampleDistribution distribution,
                                      const BlockPattern& pattern, const ExtendedExponent& p,
                                      const Rational& r, const ExperimentConfig& config) {
    validate_config(config);
    if (!(r > 0)) throw std::domain_error("exponent r must be positive");
    const int m = pattern.m();
    const int k = pattern.k();
    block_duals(pattern, p);  // validates p > m

    ExperimentResult result{
        .kind = "upper",
        .family = sample_distribution_name(distribution),
        .pattern = pattern,
        .p = p,
        .r = r,
        .config = config,
    };
    result.predicted = predicted_lambda({m, k, p, r});

    NormMethod method = config.norm_method;
    if (method == NormMethod::automatic) method = NormMethod::ascent;
    result.resolved_method = method;

    const int n_max = config.n_grid.back();
    if (method == NormMethod::analytic) {
        throw std::domain_error("analytic norms are exact for the diagonal family only");
    }
    if (method == NormMethod::exact_sup) {
        if (!p.is_infinite()) throw std::domain_error("exact sup norms require p = inf");
    }
    if (method == NormMethod::interpolation && m != 2) {
        throw std::domain_error("interpolation norms need bilinear forms (pattern degree 2)");
    }
    MultilinearForm::checked_dense_size(m, n_max);  // dense sampling guard, before any work

    const double r_d = to_double(r);
    const std::vector<ExtendedExponent> ascent_exponents(static_cast<std::size_t>(m), p);
    const char* tag = sample_distribution_name(distribution);

    run_cells(config, result.samples, [&](int n, int si) {
        const std::uint64_t cell_seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(n),
                                                    static_cast<std::uint64_t>(si), tag);
        SplitMix64 rng(cell_seed);
        const std::int64_t size = MultilinearForm::checked_dense_size(m, n);
        std::vector<double> coefficients(static_cast<std::size_t>(size));
        if (distribution == SampleDistribution::gaussian) {
            for (double& c : coefficients) c = rng.next_gaussian();
        } else {
            for (double& c : coefficients) c = rng.next_sign();
        }
        const MultilinearForm T = MultilinearForm::dense(m, n, std::move(coefficients));
        const double lhs = blocked_power_sum(T, pattern, r_d);

        NormOutcome norm;
        switch (method) {
            case NormMethod::exact_sup: {
                const NormEstimate est = exact_norm_sup(T);
                norm = {est.value, est.kind};
                break;
            }
            case NormMethod::ascent: {
                AscentConfig ascent = config.ascent;
                ascent.seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(si), "ascent");
                const NormEstimate est = estimate_norm(T, ascent_exponents, ascent);
                norm = {est.value, est.kind};
                break;
            }
            case NormMethod::interpolation: {
                const NormEstimate est = interpolation_upper_bound(T, p);
                norm = {est.value, est.kind};
                break;
            }
            case NormMethod::analytic:
            case NormMethod::automatic:
                throw std::logic_error("norm method left unresolved");
        }
        if (!(norm.value > 0.0)) {
            throw std::runtime_error("norm value collapsed to zero; cannot form quotients");
        }

        GrowthSample g;
        g.n = n;
        g.sample = si;
        g.lhs = lhs;
        g.norm = norm.value;
        g.norm_kind = norm.kind;
        g.ratio = lhs / norm.value;
        g.direction = sample_direction(norm.kind);
        return g;
    });

    summarize_and_fit(result);
    char extra[128];
    std::snprintf(extra, sizeof extra, "max quotient / n^lambda varies by factor %.3f across the grid",
                  stability_factor(result));
    result.verdict = make_verdict(result, 0.2, extra);
    return result;
}

std::string to_csv(const ExperimentResult& result) {
    std::string out = "n,sample,lhs,norm,norm_kind,ratio\n";
    char buf[192];
    for (const GrowthSample& g : result.samples) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%s,%.17g\n", g.n, g.sample, g.lhs,
                      g.norm, norm_kind_name(g.norm_kind), g.ratio);
        out += buf;
    }
    return out;
}

nlohmann::ordered_json summary_json(const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["experiment"] = result.kind;
    j["family"] = result.family;
    j["pattern"] = result.pattern.str();
    j["p"] = result.p.str();
    j["r"] = to_string(result.r);

    nlohmann::ordered_json cfg;
    cfg["n_grid"] = result.config.n_grid;
    cfg["samples"] = result.config.samples;
    cfg["base_seed"] = result.config.base_seed;
    cfg["norm_method"] = norm_method_name(result.config.norm_method);
    cfg["ascent"] = {{"restarts", result.config.ascent.restarts},
                     {"max_sweeps", result.config.ascent.max_sweeps},
                     {"tol", result.config.ascent.tol}};
    j["config"] = std::move(cfg);
    j["norm_method_resolved"] = norm_method_name(result.resolved_method);

    nlohmann::ordered_json per_n = nlohmann::ordered_json::array();
    for (const PerNSummary& s : result.per_n) {
        nlohmann::ordered_json row;
        row["n"] = s.n;
        row["median_lhs"] = s.median_lhs;
        row["median_norm"] = s.median_norm;
        row["median_ratio"] = s.median_ratio;
        row["min_ratio"] = s.min_ratio;
        row["max_ratio"] = s.max_ratio;
        per_n.push_back(std::move(row));
    }
    j["per_n"] = std::move(per_n);
    j["fit"] = {{"slope", result.fitted_slope}, {"constant", result.fitted_constant}};
    j["predicted"] = report_to_json(result.predicted);
    j["certified_direction"] = certified_direction_name(result.direction);
    j["verdict"] = result.verdict;
    return j;
}

}  // namespace hlsum
