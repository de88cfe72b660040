#include "hlsum/norms.hpp"

#include "hlsum/rng.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace hlsum {

namespace {

constexpr int kSupGuardBits = 24;     // 2^bits sign patterns max
constexpr std::int64_t kGrayChunk = 1024;   // fixed chunking => thread-count independent
constexpr std::int64_t kOuterChunk = 256;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }  // sign(0) = +1 tie-break

double abs_sum(std::span<const double> v) {
    double total = 0.0;
    for (double x : v) total += std::abs(x);
    return total;
}

std::vector<double> materialize_matrix(const MultilinearForm& T) {
    const int n = T.dim();
    std::vector<double> B(static_cast<std::size_t>(n) * n);
    std::array<int, 2> index{};
    for (int i = 0; i < n; ++i) {
        index[0] = i;
        for (int j = 0; j < n; ++j) {
            index[1] = j;
            B[static_cast<std::size_t>(i) * n + j] = T.coefficient_unchecked(index);
        }
    }
    return B;
}

}  // namespace

ExtendedExponent holder_dual(const ExtendedExponent& q) {
    if (q.is_infinite()) return ExtendedExponent(Rational(1));
    const Rational& v = q.value();
    if (v == 1) return ExtendedExponent::infinity();
    return ExtendedExponent(Rational(v / (v - 1)));
}

double lp_norm(std::span<const double> v, const ExtendedExponent& q) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    if (q.is_infinite()) return scale;
    const double qd = q.as_double();
    CompensatedSum sum;
    for (double x : v) {
        const double t = std::abs(x) / scale;
        if (t != 0.0) sum.add(std::pow(t, qd));
    }
    return scale * std::pow(sum.value(), 1.0 / qd);
}

DualStep dual_maximizer(std::span<const double> c, const ExtendedExponent& q) {
    DualStep step;
    step.x.assign(c.size(), 0.0);

    if (q.is_infinite()) {
        CompensatedSum sum;
        for (std::size_t i = 0; i < c.size(); ++i) {
            step.x[i] = sign_of(c[i]);
            sum.add(std::abs(c[i]));
        }
        step.value = sum.value();
        return step;
    }

    double scale = 0.0;
    for (double x : c) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) throw std::domain_error("dual step needs a nonzero vector");

    if (!q.is_infinite() && q.value() == 1) {
        std::size_t best = 0;   // lowest index wins ties
        for (std::size_t i = 1; i < c.size(); ++i) {
            if (std::abs(c[i]) > std::abs(c[best])) best = i;
        }
        step.x[best] = sign_of(c[best]);
        step.value = std::abs(c[best]);
        return step;
    }

    const ExtendedExponent dual = holder_dual(q);
    const double qs = dual.as_double();  // finite since q > 1
    for (std::size_t i = 0; i < c.size(); ++i) {
        step.x[i] = sign_of(c[i]) * std::pow(std::abs(c[i]) / scale, qs - 1.0);
    }
    const double unit = lp_norm(step.x, q);
    for (double& x : step.x) x /= unit;
    step.value = lp_norm(c, dual);
    return step;
}

const char* norm_kind_name(NormKind kind) {
    switch (kind) {
        case NormKind::exact: return "exact";
        case NormKind::lower_bound: return "lower_bound";
        case NormKind::upper_bound: return "upper_bound";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// alternating dual ascent

namespace {

struct RestartResult {
    double value = 0.0;
    std::vector<std::vector<double>> args;
    int sweeps = 0;
    std::vector<double> trace;
};

RestartResult run_ascent_restart(const MultilinearForm& T,
                                 std::span<const ExtendedExponent> exponents,
                                 const AscentConfig& config, int restart) {
    const int m = T.degree();
    const int n = T.dim();
    SplitMix64 rng(derive_seed(config.seed, 0, static_cast<std::uint64_t>(restart), "norm-ascent"));

    RestartResult result;
    result.args.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n)));
    for (int j = 0; j < m; ++j) {
        auto& v = result.args[static_cast<std::size_t>(j)];
        for (double& e : v) e = rng.next_gaussian();
        double unit = lp_norm(v, exponents[static_cast<std::size_t>(j)]);
        if (unit == 0.0) {  // probability-zero start; fall back to a basis vector
            std::fill(v.begin(), v.end(), 0.0);
            v[0] = 1.0;
            unit = 1.0;
        }
        for (double& e : v) e /= unit;
    }

    double current = 0.0;
    std::vector<std::vector<double>> fixed;
    fixed.reserve(static_cast<std::size_t>(m > 0 ? m - 1 : 0));
    for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
        bool any_step = false;
        for (int j = 0; j < m; ++j) {
            fixed.clear();
            for (int l = 0; l < m; ++l) {
                if (l != j) fixed.push_back(result.args[static_cast<std::size_t>(l)]);
            }
            const std::vector<double> c = T.slice_vector(j, fixed);
            const bool zero_slice =
                std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; });
            if (zero_slice) continue;  // keep the previous argument
            DualStep step = dual_maximizer(c, exponents[static_cast<std::size_t>(j)]);
            result.args[static_cast<std::size_t>(j)] = std::move(step.x);
            current = step.value;
            any_step = true;
        }
        result.trace.push_back(current);
        result.sweeps = sweep;
        if (!any_step) break;  // every slice vanished: the form is zero here
        if (sweep >= 2) {
            const double previous = result.trace[static_cast<std::size_t>(sweep) - 2];
            if (current - previous <= config.tol * current) break;
        }
    }
    result.value = current;
    return result;
}

}  // namespace

NormEstimate estimate_norm(const MultilinearForm& T,
                           std::span<const ExtendedExponent> exponents,
                           const AscentConfig& config) {
    const int m = T.degree();
    if (exponents.size() != static_cast<std::size_t>(m)) {
        throw std::domain_error("exponent list has length " + std::to_string(exponents.size()) +
                                ", expected " + std::to_string(m));
    }
    if (config.restarts < 1) throw std::domain_error("ascent needs restarts >= 1");
    if (config.max_sweeps < 1) throw std::domain_error("ascent needs max_sweeps >= 1");
    if (!(config.tol > 0.0)) throw std::domain_error("ascent needs tol > 0");

    if (T.is_dense()) {
        const auto& coeffs = T.dense_coefficients();
        const bool all_zero =
            std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
        if (all_zero) {
            NormEstimate zero;
            zero.kind = NormKind::exact;
            return zero;
        }
    }

    std::vector<RestartResult> results(static_cast<std::size_t>(config.restarts));
#pragma omp parallel for schedule(dynamic)
    for (int restart = 0; restart < config.restarts; ++restart) {
        results[static_cast<std::size_t>(restart)] =
            run_ascent_restart(T, exponents, config, restart);
    }

    std::size_t best = 0;  // strict > keeps the lowest restart index on ties
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (results[i].value > results[best].value) best = i;
    }

    NormEstimate estimate;
    estimate.restarts_used = config.restarts;
    if (results[best].value == 0.0) {
        // no restart escaped zero: the form vanishes (certified for dense
        // sources above; for procedural sources zero ascent value from
        // random starts identifies the zero form almost surely)
        estimate.kind = NormKind::exact;
        return estimate;
    }
    estimate.value = results[best].value;
    estimate.kind = NormKind::lower_bound;
    estimate.witness = std::move(results[best].args);
    estimate.iterations = results[best].sweeps;
    estimate.sweep_values = std::move(results[best].trace);
    return estimate;
}

// ---------------------------------------------------------------------------
// exact sup-norm by sign-vertex enumeration

namespace {

struct GrayBest {
    double value = -1.0;
    std::int64_t rank = -1;
};

// Sign vector for Gray rank `t`; with `pinned`, coordinate 0 stays +1 and the
// Gray bits drive coordinates 1..n-1.
void signs_from_rank(std::int64_t t, int n, bool pinned, double* x) {
    const int offset = pinned ? 1 : 0;
    const std::uint64_t gray =
        static_cast<std::uint64_t>(t) ^ (static_cast<std::uint64_t>(t) >> 1);
    for (int c = 0; c < n; ++c) x[c] = 1.0;
    for (int b = 0; b + offset < n; ++b) {
        if ((gray >> b) & 1) x[b + offset] = -1.0;
    }
}

// Walks Gray ranks [t0, t1), maintaining d = x^T B incrementally; each chunk
// rebuilds d from scratch so results do not depend on chunk scheduling.
GrayBest inner_best_chunk(const double* B, int n, bool pinned, std::int64_t t0, std::int64_t t1,
                          double* d, double* x) {
    const int offset = pinned ? 1 : 0;
    signs_from_rank(t0, n, pinned, x);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += x[i] * B[static_cast<std::size_t>(i) * n + j];
        d[j] = acc;
    }
    double value = 0.0;
    for (int j = 0; j < n; ++j) value += std::abs(d[j]);

    GrayBest best{value, t0};
    for (std::int64_t t = t0 + 1; t < t1; ++t) {
        const int bit = std::countr_zero(static_cast<std::uint64_t>(t));
        const int c = bit + offset;
        x[c] = -x[c];
        const double twice = 2.0 * x[c];
        const double* row = B + static_cast<std::size_t>(c) * n;
        double val = 0.0;
        for (int j = 0; j < n; ++j) {
            d[j] += twice * row[j];
            val += std::abs(d[j]);
        }
        if (val > best.value) {
            best.value = val;
            best.rank = t;
        }
    }
    return best;
}

GrayBest inner_best_serial(const double* B, int n, bool pinned, double* d, double* x) {
    const int bits = n - (pinned ? 1 : 0);
    const std::int64_t total = std::int64_t{1} << bits;
    GrayBest best;
    for (std::int64_t t0 = 0; t0 < total; t0 += kGrayChunk) {
        const GrayBest chunk = inner_best_chunk(B, n, pinned, t0, std::min(total, t0 + kGrayChunk), d, x);
        if (chunk.value > best.value) best = chunk;
    }
    return best;
}

GrayBest inner_best_parallel(const double* B, int n, bool pinned) {
    const int bits = n - (pinned ? 1 : 0);
    const std::int64_t total = std::int64_t{1} << bits;
    const std::int64_t chunks = (total + kGrayChunk - 1) / kGrayChunk;
    std::vector<GrayBest> per(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::array<double, 32> d{};
        std::array<double, 32> x{};
        const std::int64_t t0 = c * kGrayChunk;
        per[static_cast<std::size_t>(c)] =
            inner_best_chunk(B, n, pinned, t0, std::min(total, t0 + kGrayChunk), d.data(), x.data());
    }
    GrayBest best;
    for (const GrayBest& g : per) {
        if (g.value > best.value) best = g;
    }
    return best;
}

double outer_sign(std::int64_t op, int arg, int coord, int n) {
    if (arg == 0 && coord == 0) return 1.0;  // antipodal symmetry pin
    const int bit = arg * n + coord - 1;
    return ((op >> bit) & 1) ? -1.0 : 1.0;
}

// B_{ij} = T(x^(0), ..., x^(m-3), e_i, e_j) for the sign assignment `op`
void build_outer_matrix(const MultilinearForm& T, std::int64_t op, int outer_args,
                        std::vector<double>& B) {
    const int m = T.degree();
    const int n = T.dim();
    std::fill(B.begin(), B.end(), 0.0);
    std::array<int, 64> index{};
    const std::span<int> outer(index.data(), static_cast<std::size_t>(outer_args));
    const std::span<const int> full(index.data(), static_cast<std::size_t>(m));
    while (true) {
        double sgn = 1.0;
        for (int a = 0; a < outer_args; ++a) sgn *= outer_sign(op, a, index[static_cast<std::size_t>(a)], n);
        for (int i = 0; i < n; ++i) {
            index[static_cast<std::size_t>(m - 2)] = i;
            for (int j = 0; j < n; ++j) {
                index[static_cast<std::size_t>(m - 1)] = j;
                B[static_cast<std::size_t>(i) * n + j] += sgn * T.coefficient_unchecked(full);
            }
        }
        if (!detail::increment_index(outer, n)) break;
    }
}

NormEstimate sup_norm_linear(const MultilinearForm& T) {
    const int n = T.dim();
    std::vector<double> c(static_cast<std::size_t>(n));
    std::array<int, 1> index{};
    for (int i = 0; i < n; ++i) {
        index[0] = i;
        c[static_cast<std::size_t>(i)] = T.coefficient_unchecked(index);
    }
    NormEstimate estimate;
    estimate.kind = NormKind::exact;
    CompensatedSum sum;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = sign_of(c[static_cast<std::size_t>(i)]);
        sum.add(std::abs(c[static_cast<std::size_t>(i)]));
    }
    estimate.value = sum.value();
    estimate.witness.push_back(std::move(x));
    return estimate;
}

// witness + drift-free value at a chosen (outer pattern, inner rank)
NormEstimate assemble_sup_witness(const MultilinearForm& T, const std::vector<double>& B,
                                  std::int64_t op, std::int64_t rank, bool pinned) {
    const int m = T.degree();
    const int n = T.dim();
    NormEstimate estimate;
    estimate.kind = NormKind::exact;
    estimate.witness.assign(static_cast<std::size_t>(m),
                            std::vector<double>(static_cast<std::size_t>(n), 1.0));
    for (int a = 0; a + 2 < m; ++a) {
        for (int c = 0; c < n; ++c) {
            estimate.witness[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] =
                outer_sign(op, a, c, n);
        }
    }
    signs_from_rank(rank, n, pinned, estimate.witness[static_cast<std::size_t>(m - 2)].data());

    const auto& x = estimate.witness[static_cast<std::size_t>(m - 2)];
    auto& last = estimate.witness[static_cast<std::size_t>(m - 1)];
    double value = 0.0;
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += x[static_cast<std::size_t>(i)] * B[static_cast<std::size_t>(i) * n + j];
        }
        last[static_cast<std::size_t>(j)] = sign_of(acc);
        value += std::abs(acc);
    }
    estimate.value = value;
    return estimate;
}

void check_sup_guard(int n, int m) {
    const std::int64_t bits = static_cast<std::int64_t>(n) * (m - 1);
    if (bits > kSupGuardBits) {
        throw ResourceError("exact sup-norm enumerates 2^(n*(m-1)) sign patterns; n*(m-1) = " +
                            std::to_string(bits) + " exceeds the guard " +
                            std::to_string(kSupGuardBits));
    }
}

}  // namespace

NormEstimate exact_norm_sup(const MultilinearForm& T) {
    const int m = T.degree();
    const int n = T.dim();
    if (m == 1) return sup_norm_linear(T);
    check_sup_guard(n, m);

    if (m == 2) {
        const std::vector<double> B = materialize_matrix(T);
        const GrayBest best = inner_best_parallel(B.data(), n, /*pinned=*/true);
        return assemble_sup_witness(T, B, 0, best.rank, true);
    }

    const int outer_args = m - 2;
    const int outer_bits = n * outer_args - 1;
    const std::int64_t outer_total = std::int64_t{1} << outer_bits;
    const std::int64_t chunks = (outer_total + kOuterChunk - 1) / kOuterChunk;

    struct OuterBest {
        double value = -1.0;
        std::int64_t op = -1;
        std::int64_t rank = -1;
    };
    std::vector<OuterBest> per(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::vector<double> B(static_cast<std::size_t>(n) * n);
        std::array<double, 32> d{};
        std::array<double, 32> x{};
        OuterBest best;
        const std::int64_t end = std::min(outer_total, (c + 1) * kOuterChunk);
        for (std::int64_t op = c * kOuterChunk; op < end; ++op) {
            build_outer_matrix(T, op, outer_args, B);
            const GrayBest inner = inner_best_serial(B.data(), n, false, d.data(), x.data());
            if (inner.value > best.value) best = {inner.value, op, inner.rank};
        }
        per[static_cast<std::size_t>(c)] = best;
    }
    OuterBest best;
    for (const OuterBest& o : per) {
        if (o.value > best.value) best = o;
    }

    std::vector<double> B(static_cast<std::size_t>(n) * n);
    build_outer_matrix(T, best.op, outer_args, B);
    return assemble_sup_witness(T, B, best.op, best.rank, false);
}

NormEstimate exact_norm_sup_serial(const MultilinearForm& T) {
    const int m = T.degree();
    const int n = T.dim();
    if (m == 1) return sup_norm_linear(T);
    check_sup_guard(n, m);

    const int bits = n * (m - 1);
    const std::int64_t total = std::int64_t{1} << bits;
    std::vector<std::vector<double>> args(static_cast<std::size_t>(m - 1),
                                          std::vector<double>(static_cast<std::size_t>(n)));
    double best_value = -1.0;
    std::int64_t best_pattern = 0;
    for (std::int64_t s = 0; s < total; ++s) {
        for (int a = 0; a < m - 1; ++a) {
            for (int c = 0; c < n; ++c) {
                args[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] =
                    ((s >> (a * n + c)) & 1) ? -1.0 : 1.0;
            }
        }
        const std::vector<double> slice = T.slice_vector(m - 1, args);
        const double value = abs_sum(slice);
        if (value > best_value) {
            best_value = value;
            best_pattern = s;
        }
    }

    NormEstimate estimate;
    estimate.kind = NormKind::exact;
    for (int a = 0; a < m - 1; ++a) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) {
            v[static_cast<std::size_t>(c)] = ((best_pattern >> (a * n + c)) & 1) ? -1.0 : 1.0;
        }
        estimate.witness.push_back(std::move(v));
    }
    const std::vector<double> slice = T.slice_vector(
        m - 1, std::span<const std::vector<double>>(estimate.witness.data(),
                                                    static_cast<std::size_t>(m - 1)));
    std::vector<double> last(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) last[static_cast<std::size_t>(j)] = sign_of(slice[static_cast<std::size_t>(j)]);
    estimate.witness.push_back(std::move(last));
    estimate.value = abs_sum(slice);
    return estimate;
}

// ---------------------------------------------------------------------------
// analytic, spectral, and interpolation bounds

double diagonal_norm_analytic(int k, std::span<const ExtendedExponent> duals, int n) {
    if (k < 1) throw std::domain_error("k must be positive");
    if (n < 1) throw std::domain_error("dimension must be positive");
    if (duals.size() != static_cast<std::size_t>(k)) {
        throw std::domain_error("expected " + std::to_string(k) + " dual exponents, got " +
                                std::to_string(duals.size()));
    }
    Rational reciprocal_sum(0);
    for (const ExtendedExponent& r : duals) reciprocal_sum += r.reciprocal();
    if (reciprocal_sum > 1) {
        throw std::domain_error("diagonal norm needs sum of 1/r_j <= 1, got " +
                                to_string(reciprocal_sum));
    }
    return std::pow(static_cast<double>(n), to_double(Rational(1) - reciprocal_sum));
}

double top_singular_value(const MultilinearForm& T, double rel_tol, int* iterations) {
    if (T.degree() != 2) throw std::domain_error("top singular value needs a bilinear form");
    const int n = T.dim();
    const std::vector<double> B = materialize_matrix(T);

    // fixed pseudo-random start: all-ones can be orthogonal to the top
    // singular vector, a seeded perturbation never is (almost surely)
    SplitMix64 rng(0x7015c7a15eedULL);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& e : v) e = 1.0 + 0.125 * (rng.next_unit() - 0.5);
    double unit = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& e : v) e /= unit;

    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<double> u(static_cast<std::size_t>(n));
    double rayleigh = 0.0;
    int iter = 0;
    const int max_iter = 100000;
    for (; iter < max_iter; ++iter) {
        for (int i = 0; i < n; ++i) {  // w = B v
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += B[static_cast<std::size_t>(i) * n + j] * v[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = acc;
        }
        const double next = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
        if (next == 0.0) {  // zero form
            rayleigh = 0.0;
            break;
        }
        const bool converged = iter > 0 && std::abs(next - rayleigh) <= rel_tol * next;
        rayleigh = next;
        if (converged) break;
        for (int j = 0; j < n; ++j) {  // u = B^T w
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += B[static_cast<std::size_t>(i) * n + j] * w[static_cast<std::size_t>(i)];
            u[static_cast<std::size_t>(j)] = acc;
        }
        unit = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
        if (unit == 0.0) break;
        for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(j)] / unit;
    }
    if (iterations) *iterations = iter;
    return std::sqrt(rayleigh);
}

NormEstimate interpolation_upper_bound(const MultilinearForm& T, const ExtendedExponent& p) {
    if (T.degree() != 2) {
        throw std::domain_error("interpolation upper bound supports bilinear forms only");
    }
    if (!p.is_infinite() && p.value() < 2) {
        throw std::domain_error("interpolation upper bound requires p >= 2");
    }
    const int n = T.dim();
    constexpr double kappa = 2.0;  // conservative real-scalar interpolation constant

    int power_iters = 0;
    const double sigma = top_singular_value(T, 1e-10, &power_iters) * (1.0 + 1e-8);

    double sup_factor;
    if (n <= kSupGuardBits) {
        sup_factor = exact_norm_sup(T).value;
    } else {
        const std::vector<double> B = materialize_matrix(T);
        CompensatedSum abs_total;
        for (double b : B) abs_total.add(std::abs(b));
        sup_factor = std::min(static_cast<double>(n) * sigma, abs_total.value());
    }

    const double theta = p.is_infinite() ? 0.0 : to_double(Rational(2) / p.value());
    NormEstimate estimate;
    estimate.value = kappa * std::pow(sigma, theta) * std::pow(sup_factor, 1.0 - theta);
    estimate.kind = NormKind::upper_bound;
    estimate.iterations = power_iters;
    return estimate;
}

}  // namespace hlsum
