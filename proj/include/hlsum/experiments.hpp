#pragma once

#include "hlsum/forms.hpp"
#include "hlsum/norms.hpp"
#include "hlsum/rational.hpp"
#include "hlsum/theory.hpp"
#include "hlsum/witnesses.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hlsum {

enum class NormMethod { automatic, exact_sup, ascent, analytic, interpolation };
const char* norm_method_name(NormMethod method);
NormMethod parse_norm_method(const std::string& text);

// Whether the computed quotient lhs / norm under- or over-estimates the true
// quotient lhs / ||T||, given which side of ||T|| the norm value certifies.
// A lower-bound norm in a growth (lower) experiment certifies nothing about
// the quotient's growth, so those runs are labeled heuristic.
enum class CertifiedDirection { ratio_is_lower_bound, ratio_is_upper_bound, heuristic };
const char* certified_direction_name(CertifiedDirection direction);

enum class SampleDistribution { gaussian, sign };
const char* sample_distribution_name(SampleDistribution distribution);

struct ExperimentConfig {
    std::vector<int> n_grid;        // strictly increasing, >= 3 entries
    int samples = 1;
    std::uint64_t base_seed = 0;
    NormMethod norm_method = NormMethod::automatic;
    AscentConfig ascent;            // seed field ignored; per-cell seeds are derived
};

struct GrowthSample {
    int n = 0;
    int sample = 0;
    double lhs = 0.0;
    double norm = 0.0;
    NormKind norm_kind = NormKind::exact;
    double ratio = 0.0;
    CertifiedDirection direction = CertifiedDirection::heuristic;
};

struct PerNSummary {
    int n = 0;
    double median_lhs = 0.0;
    double median_norm = 0.0;
    double median_ratio = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

struct ExperimentResult {
    std::string kind;               // "lower" or "upper"
    std::string family;             // witness family or sample distribution
    BlockPattern pattern;
    ExtendedExponent p;
    Rational r;
    ExperimentConfig config;
    NormMethod resolved_method = NormMethod::automatic;
    std::vector<GrowthSample> samples{};  // ordered by (n, sample)
    std::vector<PerNSummary> per_n{};
    double fitted_slope = 0.0;
    double fitted_constant = 0.0;
    ExponentReport predicted{};
    CertifiedDirection direction = CertifiedDirection::heuristic;
    std::string verdict{};
};

struct FitResult {
    double slope = 0.0;
    double constant = 0.0;  // exp(intercept)
};

// Ordinary least squares on (ln n, ln value). Needs >= 3 points with
// strictly increasing n and positive values.
FitResult fit_loglog(std::span<const std::pair<double, double>> points);

/**
 * Growth experiment for witness families: for each (n, sample) build the
 * k-linear core, lift it through the pattern, and compare the blocked power
 * sum against a norm value whose certification direction is tracked per
 * sample. Dividing by an exact or upper-bound norm makes each quotient a
 * certified lower bound on the true quotient, so a fitted growth exponent
 * is genuine; ascent norms make the run heuristic. The fitted slope comes
 * from median quotients per n. Deterministic: every cell derives its own
 * seed from (base_seed, n, sample), results are keyed by cell, and reruns
 * are byte-identical at any worker count.
 */
ExperimentResult run_lower_experiment(const WitnessFamily& family, const BlockPattern& pattern,
                                      const ExtendedExponent& p, const Rational& r,
                                      const ExperimentConfig& config);

/**
 * Sampled verification of the growth bound on random dense forms: quotients
 * computed against ascent (lower-bound) norms over-estimate the true
 * quotient, so a quotient staying below C * n^lambda is evidence the bound
 * holds, and any excursion is a genuine violation candidate. With the
 * interpolation method (bilinear, p >= 2) the direction flips to certified
 * ratio lower bounds, which is what the p = 2m boundary probe uses.
 */
ExperimentResult run_upper_experiment(SampleDistribution distribution,
                                      const BlockPattern& pattern, const ExtendedExponent& p,
                                      const Rational& r, const ExperimentConfig& config);

// CSV with header n,sample,lhs,norm,norm_kind,ratio; 17 significant digits.
std::string to_csv(const ExperimentResult& result);

// Machine-readable summary: config echo, per-n medians, fit, prediction,
// certification direction, verdict.
nlohmann::ordered_json summary_json(const ExperimentResult& result);

}  // namespace hlsum
