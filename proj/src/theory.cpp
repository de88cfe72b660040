#include "hlsum/theory.hpp"

#include <stdexcept>

namespace hlsum {

namespace {

void check_p_above_m(int m, const ExtendedExponent& p) {
    if (m < 1) throw std::domain_error("degree m must be positive");
    if (p <= Rational(m)) {
        throw std::domain_error("requires p > m; got p = " + p.str() + ", m = " +
                                std::to_string(m));
    }
}

void check_params(const RegimeParams& params) {
    if (params.k < 1 || params.k > params.m) {
        throw std::domain_error("requires m >= k >= 1; got m = " + std::to_string(params.m) +
                                ", k = " + std::to_string(params.k));
    }
    check_p_above_m(params.m, params.p);
    if (!(params.r > 0)) {
        throw std::domain_error("exponent r must be positive, got " + to_string(params.r));
    }
}

Rational max_with_zero(const Rational& v) { return v > 0 ? v : Rational(0); }

}  // namespace

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::case_a: return "case_a";
        case Regime::case_b: return "case_b";
        case Regime::boundary_p_eq_2m: return "boundary_p_eq_2m";
    }
    return "unknown";
}

Regime classify_regime(int m, const ExtendedExponent& p) {
    check_p_above_m(m, p);
    const Rational twice_m(2 * m);
    if (p > twice_m) return Regime::case_a;
    if (p == ExtendedExponent(twice_m)) return Regime::boundary_p_eq_2m;
    return Regime::case_b;
}

Rational critical_rho(int m, int k, const ExtendedExponent& p) {
    if (k < 1 || k > m) {
        throw std::domain_error("requires m >= k >= 1; got m = " + std::to_string(m) +
                                ", k = " + std::to_string(k));
    }
    check_p_above_m(m, p);
    if (p.is_infinite()) return Rational(2 * k, k + 1);
    const Rational& pv = p.value();
    if (pv >= Rational(2 * m)) {
        return Rational(2 * k * pv / (k * pv + pv - 2 * m));
    }
    return Rational(pv / (pv - m));
}

Rational case_a_exponent(int m, int k, const ExtendedExponent& p, const Rational& r) {
    if (!(r > 0)) throw std::domain_error("exponent r must be positive");
    if (p.is_infinite()) {
        return Rational((Rational(2 * k) - k * r - r) / (2 * r));
    }
    const Rational& pv = p.value();
    return Rational((2 * k * pv - k * pv * r - pv * r + 2 * r * m) / (2 * pv * r));
}

Rational case_b_exponent(int m, const ExtendedExponent& p, const Rational& r) {
    if (!(r > 0)) throw std::domain_error("exponent r must be positive");
    if (p.is_infinite()) {
        return Rational((Rational(1) - r) / r);
    }
    const Rational& pv = p.value();
    return Rational((pv - r * pv + r * m) / (pv * r));
}

ExponentReport predicted_lambda(const RegimeParams& params) {
    check_params(params);
    const Rational m_over_p = Rational(params.m) * params.p.reciprocal();

    ExponentReport report;
    report.regime = classify_regime(params.m, params.p);
    report.critical_rho = critical_rho(params.m, params.k, params.p);
    // lower bounds via their own routes; the case formulas must meet them
    // exactly where positive, which the property tests pin down
    report.lower_bounds.ksz =
        Rational(m_over_p + (Rational(2 * params.k) - params.k * params.r - params.r) /
                                (2 * params.r));
    report.lower_bounds.diagonal = Rational(Rational(1) / params.r - 1 + m_over_p);

    switch (report.regime) {
        case Regime::case_a:
            report.lambda = max_with_zero(case_a_exponent(params.m, params.k, params.p, params.r));
            break;
        case Regime::case_b:
            report.lambda = max_with_zero(case_b_exponent(params.m, params.p, params.r));
            break;
        case Regime::boundary_p_eq_2m: {
            report.lambda = max_with_zero(case_a_exponent(params.m, params.k, params.p, params.r));
            report.lambda_alt = max_with_zero(case_b_exponent(params.m, params.p, params.r));
            if (report.lambda != *report.lambda_alt) {
                report.warnings.push_back(
                    "p = 2m lies in both exponent regimes and they disagree here (" +
                    to_string(report.lambda) + " vs " + to_string(*report.lambda_alt) +
                    "); reporting the larger value, whose witness construction still applies "
                    "at p = 2m, and attaching the other as lambda_alt");
            } else {
                report.warnings.push_back(
                    "p = 2m lies in both exponent regimes; the two formulas agree here");
            }
            break;
        }
    }
    return report;
}

std::vector<ClassicalEntry> classical_exponents(int m, const ExtendedExponent& p) {
    if (m < 1) throw std::domain_error("degree m must be positive");
    std::vector<ClassicalEntry> table;

    {
        ClassicalEntry e;
        e.name = "Bohnenblust-Hille";
        e.setting = "all blocks singletons (k = m), p = inf";
        if (p.is_infinite()) {
            e.applicable = true;
            e.exponent = Rational(2 * m, m + 1);
        } else {
            e.note = "needs p = inf";
        }
        table.push_back(std::move(e));
    }
    {
        ClassicalEntry e;
        e.name = "Praciano-Pereira";
        e.setting = "all blocks singletons (k = m), 2m <= p <= inf";
        if (p.is_infinite()) {
            e.applicable = true;
            e.exponent = Rational(2 * m, m + 1);
            e.note = "p = inf limit coincides with Bohnenblust-Hille";
        } else if (p >= Rational(2 * m)) {
            e.applicable = true;
            // 2m / (m + 1 - 2m/p)
            e.exponent = Rational(Rational(2 * m) / (Rational(m + 1) - Rational(2 * m) / p.value()));
        } else {
            e.note = "needs p >= 2m";
        }
        table.push_back(std::move(e));
    }
    {
        ClassicalEntry e;
        e.name = "Dimant-Sevilla-Peris (Hardy-Littlewood regime)";
        e.setting = "all blocks singletons (k = m), m < p <= 2m";
        if (!p.is_infinite() && p > Rational(m) && p <= Rational(2 * m)) {
            e.applicable = true;
            // 1 / (1 - m/p)
            e.exponent = Rational(Rational(1) / (Rational(1) - Rational(m) / p.value()));
        } else {
            e.note = "needs m < p <= 2m";
        }
        table.push_back(std::move(e));
    }
    {
        ClassicalEntry e;
        e.name = "Aron-Globevnik";
        e.setting = "single block (k = 1, diagonal), p = inf";
        if (p.is_infinite()) {
            e.applicable = true;
            e.exponent = Rational(1);
        } else {
            e.note = "needs p = inf";
        }
        table.push_back(std::move(e));
    }
    {
        ClassicalEntry e;
        e.name = "Zalduendo";
        e.setting = "single block (k = 1, diagonal), m < p < inf";
        if (!p.is_infinite() && p > Rational(m)) {
            e.applicable = true;
            // 1 / (1 - m/p) = p / (p - m)
            e.exponent = Rational(p.value() / (p.value() - m));
        } else if (p.is_infinite()) {
            e.note = "p = inf limit is the Aron-Globevnik exponent 1";
        } else {
            e.note = "needs p > m";
        }
        table.push_back(std::move(e));
    }
    return table;
}

nlohmann::ordered_json rational_to_json(const Rational& q) {
    nlohmann::ordered_json j;
    j["num"] = to_int64_checked(numerator(q));
    j["den"] = to_int64_checked(denominator(q));
    j["decimal"] = to_double(q);
    return j;
}

nlohmann::ordered_json report_to_json(const ExponentReport& report) {
    nlohmann::ordered_json j;
    j["lambda"] = rational_to_json(report.lambda);
    j["regime"] = regime_name(report.regime);
    j["lambda_alt"] =
        report.lambda_alt ? rational_to_json(*report.lambda_alt) : nlohmann::ordered_json(nullptr);
    j["critical_rho"] = rational_to_json(report.critical_rho);
    j["lower_bounds"] = {{"ksz", rational_to_json(report.lower_bounds.ksz)},
                         {"diagonal", rational_to_json(report.lower_bounds.diagonal)}};
    j["warnings"] = report.warnings;
    return j;
}

}  // namespace hlsum
