#include "hlsum/theory.hpp"

#include <doctest.h>
#include <json.hpp>

#include <stdexcept>
#include <vector>

using namespace hlsum;

namespace {

const ExtendedExponent kInf = ExtendedExponent::infinity();

std::vector<ExtendedExponent> exponent_grid(int m) {
    return {ExtendedExponent(2 * m), ExtendedExponent(2 * m + 1), ExtendedExponent(3 * m),
            ExtendedExponent(4 * m), kInf};
}

const ClassicalEntry& entry_named(const std::vector<ClassicalEntry>& table,
                                  const std::string& name) {
    for (const ClassicalEntry& e : table) {
        if (e.name == name) return e;
    }
    REQUIRE_MESSAGE(false, "no catalogue entry named " << name);
    return table.front();
}

}  // namespace

TEST_CASE("regime classification splits at p = 2m") {
    CHECK(classify_regime(2, kInf) == Regime::case_a);
    CHECK(classify_regime(2, ExtendedExponent(5)) == Regime::case_a);
    CHECK(classify_regime(2, ExtendedExponent(3)) == Regime::case_b);
    CHECK(classify_regime(2, ExtendedExponent(4)) == Regime::boundary_p_eq_2m);
    CHECK_THROWS_WITH_AS(classify_regime(2, ExtendedExponent(2)),
                         doctest::Contains("requires p > m"), std::domain_error);
    CHECK_THROWS_AS(classify_regime(3, ExtendedExponent(Rational(5, 2))), std::domain_error);
}

TEST_CASE("critical exponents on known inputs") {
    CHECK(critical_rho(2, 2, kInf) == Rational(4, 3));
    CHECK(critical_rho(2, 1, ExtendedExponent(8)) == Rational(4, 3));
    CHECK(critical_rho(3, 3, ExtendedExponent(6)) == Rational(2));
    CHECK(critical_rho(2, 2, ExtendedExponent(8)) == Rational(8, 5));
    CHECK(critical_rho(2, 1, ExtendedExponent(3)) == Rational(3));
    CHECK_THROWS_AS(critical_rho(2, 2, ExtendedExponent(2)), std::domain_error);
}

TEST_CASE("at p = 2m the two critical-exponent formulas coincide") {
    // p/(p-m) = 2m/m = 2 and 2kp/(kp+p-2m) = 4km/(2km) = 2 for every k
    for (int m = 1; m <= 5; ++m) {
        for (int k = 1; k <= m; ++k) {
            CHECK(critical_rho(m, k, ExtendedExponent(2 * m)) == Rational(2));
        }
    }
}

TEST_CASE("predicted exponents on known inputs") {
    CHECK(predicted_lambda({2, 2, kInf, Rational(1)}).lambda == Rational(1, 2));
    CHECK(predicted_lambda({2, 1, ExtendedExponent(3), Rational(1)}).lambda == Rational(2, 3));

    const ExponentReport boundary = predicted_lambda({2, 2, ExtendedExponent(4), Rational(1)});
    CHECK(boundary.lambda == Rational(1));
    CHECK(boundary.regime == Regime::boundary_p_eq_2m);
    REQUIRE(boundary.lambda_alt.has_value());
    CHECK(*boundary.lambda_alt == Rational(1, 2));
    CHECK_FALSE(boundary.warnings.empty());

    CHECK_THROWS_AS(predicted_lambda({2, 2, ExtendedExponent(2), Rational(1)}),
                    std::domain_error);
    CHECK_THROWS_AS(predicted_lambda({2, 3, kInf, Rational(1)}), std::domain_error);
    CHECK_THROWS_AS(predicted_lambda({2, 2, kInf, Rational(-1)}), std::domain_error);
}

TEST_CASE("the high-regime formula equals the random-sign bound expression") {
    for (int m = 1; m <= 4; ++m) {
        for (int k = 1; k <= m; ++k) {
            for (const ExtendedExponent& p : exponent_grid(m)) {
                if (p < Rational(2 * m)) continue;
                for (const Rational& r :
                     {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(7, 3)}) {
                    const Rational lhs = case_a_exponent(m, k, p, r);
                    const Rational rhs =
                        Rational(m) * p.reciprocal() +
                        (Rational(2 * k) - Rational(k) * r - r) / (2 * r);
                    CHECK(lhs == rhs);
                }
            }
        }
    }
}

TEST_CASE("the low-regime formula equals the diagonal bound expression") {
    for (int m = 1; m <= 4; ++m) {
        for (int pp = m + 1; pp <= 2 * m; ++pp) {
            const ExtendedExponent p(pp);
            for (const Rational& r : {Rational(1, 2), Rational(1), Rational(5, 3)}) {
                const Rational lhs = case_b_exponent(m, p, r);
                const Rational rhs = Rational(1) / r - 1 + Rational(m) * p.reciprocal();
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("lambda vanishes exactly at and above the critical exponent") {
    for (int m = 1; m <= 4; ++m) {
        for (int k = 1; k <= m; ++k) {
            for (const ExtendedExponent& p : exponent_grid(m)) {
                const Rational rho = critical_rho(m, k, p);
                for (const Rational& r :
                     {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), rho}) {
                    const ExponentReport report = predicted_lambda({m, k, p, r});
                    CHECK((report.lambda == 0) == (r >= rho));
                    CHECK(report.lambda >= 0);
                    CHECK(report.critical_rho == rho);
                }
            }
        }
    }
}

TEST_CASE("with a single block the boundary is seamless") {
    for (int m = 1; m <= 5; ++m) {
        const ExtendedExponent p(2 * m);
        for (const Rational& r : {Rational(1, 2), Rational(1), Rational(2)}) {
            CHECK(case_a_exponent(m, 1, p, r) == case_b_exponent(m, p, r));
            CHECK(predicted_lambda({m, 1, p, r}).warnings.back().find("agree") !=
                  std::string::npos);
        }
    }
}

TEST_CASE("both witness bounds are attached to every report") {
    const ExponentReport report = predicted_lambda({3, 2, ExtendedExponent(7), Rational(1)});
    CHECK(report.lower_bounds.ksz ==
          Rational(3, 7) + (Rational(4) - Rational(2) - Rational(1)) / Rational(2));
    CHECK(report.lower_bounds.diagonal == Rational(1) - 1 + Rational(3, 7));
}

TEST_CASE("classical catalogue at p = inf") {
    const std::vector<ClassicalEntry> table = classical_exponents(2, kInf);
    const ClassicalEntry& bh = entry_named(table, "Bohnenblust-Hille");
    CHECK(bh.applicable);
    CHECK(bh.exponent == Rational(4, 3));
    CHECK(bh.exponent == critical_rho(2, 2, kInf));

    const ClassicalEntry& ag = entry_named(table, "Aron-Globevnik");
    CHECK(ag.applicable);
    CHECK(ag.exponent == Rational(1));
    CHECK(ag.exponent == critical_rho(2, 1, kInf));

    CHECK_FALSE(entry_named(table, "Zalduendo").applicable);
}

TEST_CASE("classical catalogue at finite p") {
    const std::vector<ClassicalEntry> table = classical_exponents(2, ExtendedExponent(8));
    const ClassicalEntry& pp = entry_named(table, "Praciano-Pereira");
    CHECK(pp.applicable);
    CHECK(pp.exponent == Rational(8, 5));
    CHECK(pp.exponent == critical_rho(2, 2, ExtendedExponent(8)));

    const ClassicalEntry& z = entry_named(table, "Zalduendo");
    CHECK(z.applicable);
    CHECK(z.exponent == Rational(4, 3));
    CHECK(z.exponent == critical_rho(2, 1, ExtendedExponent(8)));

    CHECK_FALSE(entry_named(table, "Bohnenblust-Hille").applicable);
    CHECK_FALSE(entry_named(table, "Aron-Globevnik").applicable);
}

TEST_CASE("classical recoveries for every degree up to five") {
    for (int m = 1; m <= 5; ++m) {
        CHECK(critical_rho(m, m, kInf) == Rational(2 * m, m + 1));

        for (int pp : {2 * m, 2 * m + 1, 3 * m, 5 * m}) {
            // 2m/(m+1-2m/p) with exact rationals
            const Rational expected =
                Rational(2 * m) / (Rational(m + 1) - Rational(2 * m) / Rational(pp));
            CHECK(critical_rho(m, m, ExtendedExponent(pp)) == expected);
        }

        for (int pp = m + 1; pp <= 2 * m; ++pp) {
            const Rational expected = Rational(1) / (Rational(1) - Rational(m) / Rational(pp));
            CHECK(critical_rho(m, m, ExtendedExponent(pp)) == expected);
        }

        for (int pp : {2 * m, 3 * m, 5 * m}) {
            const Rational expected = Rational(1) / (Rational(1) - Rational(m) / Rational(pp));
            CHECK(critical_rho(m, 1, ExtendedExponent(pp)) == expected);
        }
    }
}

TEST_CASE("rationals serialize with integer parts and a decimal rendering") {
    const nlohmann::ordered_json j = rational_to_json(Rational(4, 3));
    CHECK(j["num"] == 4);
    CHECK(j["den"] == 3);
    CHECK(j["decimal"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("exponent reports serialize with all fields") {
    const nlohmann::ordered_json j =
        report_to_json(predicted_lambda({2, 2, ExtendedExponent(4), Rational(1)}));
    CHECK(j["lambda"]["num"] == 1);
    CHECK(j["lambda"]["den"] == 1);
    CHECK(j["regime"] == "boundary_p_eq_2m");
    CHECK(j["lambda_alt"]["num"] == 1);
    CHECK(j["lambda_alt"]["den"] == 2);
    CHECK(j["critical_rho"]["num"] == 2);
    CHECK(j["lower_bounds"]["ksz"]["num"] == 1);
    CHECK(j["lower_bounds"]["diagonal"]["num"] == 1);
    CHECK(j["lower_bounds"]["diagonal"]["den"] == 2);
    CHECK(j["warnings"].is_array());
    CHECK(j["warnings"].size() == 1);

    const nlohmann::ordered_json plain =
        report_to_json(predicted_lambda({2, 2, kInf, Rational(1)}));
    CHECK(plain["lambda_alt"].is_null());
    CHECK(plain["warnings"].empty());
}
