#include "hlsum/forms.hpp"

#include "hlsum/errors.hpp"
#include "hlsum/parallel.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace hlsum;
using hlsum::testing::all_patterns;
using hlsum::testing::random_dense_form;
using hlsum::testing::random_vector;

namespace {

MultilinearForm two_by_two() {
    // row-major [[1,2],[3,4]]
    return MultilinearForm::dense(2, 2, {1.0, 2.0, 3.0, 4.0});
}

double full_power_sum(const MultilinearForm& form, double r) {
    return blocked_power_sum(form, BlockPattern::all_ones(form.degree()), r);
}

}  // namespace

TEST_CASE("block patterns validate and render") {
    const BlockPattern pattern({2, 1});
    CHECK(pattern.k() == 2);
    CHECK(pattern.m() == 3);
    CHECK(pattern.block(0) == 2);
    CHECK(pattern.str() == "2,1");
    CHECK(BlockPattern::parse("2,1") == pattern);
    CHECK(BlockPattern::all_ones(3) == BlockPattern({1, 1, 1}));

    CHECK_THROWS_AS(BlockPattern({}), std::domain_error);
    CHECK_THROWS_AS(BlockPattern({1, 0}), std::domain_error);
    CHECK_THROWS_AS(BlockPattern({-2}), std::domain_error);
    CHECK_THROWS_AS(BlockPattern::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(BlockPattern::parse("2,x"), std::invalid_argument);
}

TEST_CASE("coefficient access is bounds-checked and layout-correct") {
    const MultilinearForm T = two_by_two();
    CHECK(T.coefficient(std::array{0, 1}) == 2.0);
    CHECK(T.coefficient(std::array{1, 0}) == 3.0);
    CHECK_THROWS_AS(T.coefficient(std::array{0, 2}), std::domain_error);
    CHECK_THROWS_AS(T.coefficient(std::array{-1, 0}), std::domain_error);
    CHECK_THROWS_AS(T.coefficient(std::array{0}), std::domain_error);
}

TEST_CASE("dense construction rejects bad input") {
    CHECK_THROWS_AS(MultilinearForm::dense(2, 2, {1.0, 2.0, 3.0}), std::domain_error);
    CHECK_THROWS_AS(
        MultilinearForm::dense(2, 2, {1.0, 2.0, 3.0, std::numeric_limits<double>::quiet_NaN()}),
        std::domain_error);
    CHECK_THROWS_AS(
        MultilinearForm::dense(2, 2, {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}),
        std::domain_error);
    CHECK_THROWS_AS(MultilinearForm::checked_dense_size(5, 64), ResourceError);
    CHECK(MultilinearForm::checked_dense_size(3, 100) == 1000000);
}

TEST_CASE("evaluation is multilinear and matches hand values") {
    const MultilinearForm id = MultilinearForm::dense(2, 2, {1.0, 0.0, 0.0, 1.0});
    const std::vector<std::vector<double>> disjoint = {{1.0, 0.0}, {0.0, 1.0}};
    const std::vector<std::vector<double>> ones = {{1.0, 1.0}, {1.0, 1.0}};
    const std::vector<std::vector<double>> with_zero = {{0.0, 0.0}, {1.0, 1.0}};
    CHECK(id.evaluate(disjoint) == 0.0);
    CHECK(id.evaluate(ones) == 2.0);
    CHECK(id.evaluate(with_zero) == 0.0);

    const std::vector<std::vector<double>> wrong = {{1.0, 0.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(id.evaluate(wrong), std::domain_error);
}

TEST_CASE("slice vectors restrict one argument") {
    const MultilinearForm T = two_by_two();
    const std::vector<std::vector<double>> first = {{1.0, 0.0}};
    const std::vector<double> row = T.slice_vector(1, first);
    CHECK(row == std::vector<double>{1.0, 2.0});

    const std::vector<std::vector<double>> second = {{1.0, 1.0}};
    const std::vector<double> column_sums = T.slice_vector(0, second);
    CHECK(column_sums == std::vector<double>{3.0, 7.0});

    const std::vector<std::vector<double>> zero = {{0.0, 0.0}};
    CHECK(T.slice_vector(0, zero) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("slice and evaluate are consistent on random forms") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + static_cast<int>(rng.next() % 3);
        const int n = 2 + static_cast<int>(rng.next() % 4);
        const MultilinearForm T = random_dense_form(m, n, rng.next());
        std::vector<std::vector<double>> args;
        for (int j = 0; j < m; ++j) args.push_back(random_vector(n, rng));
        const double direct = T.evaluate(args);
        for (int position = 0; position < m; ++position) {
            std::vector<std::vector<double>> fixed;
            for (int j = 0; j < m; ++j) {
                if (j != position) fixed.push_back(args[static_cast<std::size_t>(j)]);
            }
            const std::vector<double> c = T.slice_vector(position, fixed);
            double via_slice = 0.0;
            for (int i = 0; i < n; ++i) {
                via_slice += c[static_cast<std::size_t>(i)] *
                             args[static_cast<std::size_t>(position)][static_cast<std::size_t>(i)];
            }
            CHECK(via_slice == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("blocked coefficients repeat block indices") {
    const MultilinearForm T = two_by_two();
    const BlockPattern whole({2});
    CHECK(T.blocked_coefficient(whole, std::array{1}) == 4.0);
    CHECK(T.blocked_coefficient(whole, std::array{0}) == 1.0);

    const BlockPattern singletons = BlockPattern::all_ones(2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(T.blocked_coefficient(singletons, std::array{i, j}) ==
                  T.coefficient(std::array{i, j}));
        }
    }

    CHECK_THROWS_AS(T.blocked_coefficient(BlockPattern({3}), std::array{0}), std::domain_error);
}

TEST_CASE("procedural and dense sources answer identically") {
    const MultilinearForm dense = random_dense_form(3, 3, 99);
    const MultilinearForm proc = MultilinearForm::procedural(
        3, 3, [dense](std::span<const int> idx) { return dense.coefficient_unchecked(idx); });
    CHECK_FALSE(proc.is_dense());
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            for (int c = 0; c < 3; ++c) {
                const std::array idx{a, b, c};
                CHECK(proc.coefficient(idx) == dense.coefficient(idx));
            }
        }
    }
    for (const BlockPattern& pattern : all_patterns(3)) {
        CHECK(blocked_power_sum(proc, pattern, 1.5) ==
              doctest::Approx(blocked_power_sum(dense, pattern, 1.5)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(proc.dense_coefficients(), std::logic_error);
}

TEST_CASE("blocked power sums match hand values") {
    const MultilinearForm T = two_by_two();
    CHECK(blocked_power_sum(T, BlockPattern({1, 1}), 2.0) ==
          doctest::Approx(std::sqrt(30.0)).epsilon(1e-15));
    CHECK(blocked_power_sum(T, BlockPattern({2}), 1.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(blocked_power_sum(T, BlockPattern({1, 1}), 0.0), std::domain_error);
    CHECK_THROWS_AS(blocked_power_sum(T, BlockPattern({2}), -1.0), std::domain_error);
    CHECK_THROWS_AS(blocked_power_sum(T, BlockPattern({3}), 1.0), std::domain_error);
}

TEST_CASE("zero forms have zero power sums") {
    const MultilinearForm zero = MultilinearForm::dense(2, 3, std::vector<double>(9, 0.0));
    CHECK(blocked_power_sum(zero, BlockPattern({1, 1}), 1.0) == 0.0);
    CHECK(blocked_power_sum(zero, BlockPattern({2}), 0.5) == 0.0);
}

TEST_CASE("blocked sum with all-singleton blocks equals the full sum") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 2 + static_cast<int>(rng.next() % 3);
        const int n = 2 + static_cast<int>(rng.next() % 3);
        const MultilinearForm T = random_dense_form(m, n, rng.next());
        for (double r : {0.5, 1.0, 2.0}) {
            CHECK(blocked_power_sum(T, BlockPattern::all_ones(m), r) == full_power_sum(T, r));
        }
    }
}

TEST_CASE("grouping indices never increases the power sum") {
    SplitMix64 rng(7);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + static_cast<int>(rng.next() % 3);  // 2..4
        const int n = 2 + static_cast<int>(rng.next() % 3);
        const MultilinearForm T = random_dense_form(m, n, rng.next());
        for (double r : {0.75, 1.0, 1.5}) {
            const double full = full_power_sum(T, r);
            for (const BlockPattern& pattern : all_patterns(m)) {
                const double blocked = blocked_power_sum(T, pattern, r);
                CHECK(blocked <= full * (1.0 + 1e-12));
                ++checked;
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("small-exponent sums interpolate against larger exponents") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 2 + static_cast<int>(rng.next() % 2);
        const int n = 2 + static_cast<int>(rng.next() % 4);
        const MultilinearForm T = random_dense_form(m, n, rng.next());
        for (const BlockPattern& pattern : all_patterns(m)) {
            const int k = pattern.k();
            for (auto [r, rho] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}, std::pair{1.3, 1.3}}) {
                const double lhs = blocked_power_sum(T, pattern, r);
                const double bound = std::pow(static_cast<double>(n), k * (1.0 / r - 1.0 / rho)) *
                                     blocked_power_sum(T, pattern, rho);
                CHECK(lhs <= bound * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("power sums are absolutely homogeneous") {
    const MultilinearForm T = random_dense_form(3, 4, 555);
    const BlockPattern pattern({2, 1});
    const double base = blocked_power_sum(T, pattern, 1.25);
    // doubling is exact: scaling by a power of two commutes with every
    // floating-point operation in the kernel
    CHECK(blocked_power_sum(T.scaled(2.0), pattern, 1.25) == 2.0 * base);
    CHECK(blocked_power_sum(T.scaled(-2.0), pattern, 1.25) == 2.0 * base);
    CHECK(blocked_power_sum(T.scaled(0.3), pattern, 1.25) ==
          doctest::Approx(0.3 * base).epsilon(1e-12));
}

TEST_CASE("parallel kernel agrees with the serial reference") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        const int m = 2 + static_cast<int>(rng.next() % 3);
        const int n = 3 + static_cast<int>(rng.next() % 4);
        const MultilinearForm T = random_dense_form(m, n, rng.next());
        for (const BlockPattern& pattern : all_patterns(m)) {
            for (double r : {0.5, 1.0, 2.0}) {
                const double fast = blocked_power_sum(T, pattern, r);
                const double reference = blocked_power_sum_serial(T, pattern, r);
                CHECK(fast == doctest::Approx(reference).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("power-sum kernel output does not depend on the worker count") {
    const MultilinearForm T = random_dense_form(2, 40, 808);
    const BlockPattern pattern({1, 1});
    set_max_threads(1);
    const double one_worker = blocked_power_sum(T, pattern, 0.7);
    set_max_threads(8);
    const double eight_workers = blocked_power_sum(T, pattern, 0.7);
    set_max_threads(0);
    CHECK(one_worker == eight_workers);
}

TEST_CASE("compensated accumulation survives cancellation") {
    CompensatedSum sum;
    sum.add(1.0);
    sum.add(1e100);
    sum.add(1.0);
    sum.add(-1e100);
    CHECK(sum.value() == 2.0);
}
