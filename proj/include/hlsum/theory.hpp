#pragma once

#include "hlsum/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hlsum {

// Which branch of the exponent formulas governs (m, p): the high-exponent
// regime p > 2m, the low regime m < p < 2m, or the overlap point p = 2m
// where both branches claim to apply but disagree for k > 1, r < 2.
enum class Regime { case_a, case_b, boundary_p_eq_2m };
const char* regime_name(Regime regime);

struct RegimeParams {
    int m = 1;
    int k = 1;
    ExtendedExponent p = ExtendedExponent::infinity();
    Rational r = 1;
};

Regime classify_regime(int m, const ExtendedExponent& p);

// Smallest summability exponent keeping blocked power sums bounded in n:
// p/(p-m) for m < p <= 2m, and 2kp/(kp+p-2m) for p >= 2m (limit 2k/(k+1)
// at p = inf). Exact rational output.
Rational critical_rho(int m, int k, const ExtendedExponent& p);

// Raw case exponents before the max{., 0} floor, kept separate so the
// algebraic identities relating them to the two witness lower bounds stay
// independently testable.
Rational case_a_exponent(int m, int k, const ExtendedExponent& p, const Rational& r);  // (2kp-kpr-pr+2rm)/(2pr)
Rational case_b_exponent(int m, const ExtendedExponent& p, const Rational& r);         // (p-rp+rm)/(pr)

struct LambdaLowerBounds {
    Rational ksz;       // m/p + (2k-kr-r)/(2r), from the random-sign witness
    Rational diagonal;  // 1/r - 1 + m/p, from the diagonal witness
};

struct ExponentReport {
    Rational lambda;                    // predicted growth exponent, >= 0
    Regime regime = Regime::case_a;
    std::optional<Rational> lambda_alt; // the other branch's value at p = 2m
    Rational critical_rho;
    LambdaLowerBounds lower_bounds;
    std::vector<std::string> warnings;
};

// Predicted exponent of n in the blocked power-sum bound, with regime
// classification, the zero floor, both witness lower bounds, and an explicit
// warning at the overlap point p = 2m (case-a value reported as primary, the
// smaller case-b value attached as lambda_alt). Exact rationals throughout.
ExponentReport predicted_lambda(const RegimeParams& params);

struct ClassicalEntry {
    std::string name;
    std::string setting;             // hypothesis, e.g. "k = m, p = inf"
    bool applicable = false;
    Rational exponent;               // meaningful only when applicable
    std::string note;                // why not applicable, or a remark
};

// The classical optimal-exponent catalogue at (m, p): Bohnenblust-Hille,
// Praciano-Pereira, Dimant-Sevilla-Peris / Hardy-Littlewood, Aron-Globevnik,
// Zalduendo. Entries outside their hypotheses are marked not applicable.
// Each applicable entry agrees with critical_rho at the matching k.
std::vector<ClassicalEntry> classical_exponents(int m, const ExtendedExponent& p);

// Rationals serialize as {"num": ..., "den": ..., "decimal": ...}.
nlohmann::ordered_json rational_to_json(const Rational& q);
nlohmann::ordered_json report_to_json(const ExponentReport& report);

}  // namespace hlsum
