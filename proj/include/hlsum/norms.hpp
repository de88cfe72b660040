#pragma once

#include "hlsum/forms.hpp"
#include "hlsum/rational.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hlsum {

// Holder conjugate q* with 1/q + 1/q* = 1; exact on rationals, 1 <-> inf.
ExtendedExponent holder_dual(const ExtendedExponent& q);

// ell_q norm of a vector; q = inf gives the max-magnitude norm. Scaled by the
// largest entry so tiny/huge inputs do not overflow the pow.
double lp_norm(std::span<const double> v, const ExtendedExponent& q);

struct DualStep {
    std::vector<double> x;  // unit ell_q vector maximizing <c, x>
    double value = 0.0;     // attained value = ||c||_{q*}
};

// Exact maximizer of <c, x> over the ell_q unit ball. For finite q the
// maximizer is x_i = sign(c_i)|c_i|^{q*-1}/||c||_{q*}^{q*-1}; q = inf gives
// x = sign(c) with the fixed tie-break sign(0) = +1; q = 1 picks the
// lowest-index entry of largest magnitude. c must be nonzero.
DualStep dual_maximizer(std::span<const double> c, const ExtendedExponent& q);

enum class NormKind { exact, lower_bound, upper_bound };
const char* norm_kind_name(NormKind kind);

struct NormEstimate {
    double value = 0.0;
    NormKind kind = NormKind::lower_bound;
    std::vector<std::vector<double>> witness;  // m unit vectors; empty when none
    int iterations = 0;                        // sweeps in the reported run
    int restarts_used = 0;
    std::vector<double> sweep_values;          // per-sweep objective, non-decreasing
};

struct AscentConfig {
    int restarts = 16;
    int max_sweeps = 500;
    double tol = 1e-10;
    std::uint64_t seed = 0;
};

/**
 * Heuristic lower bound on ||T|| over the product of ell_{q_j} unit balls by
 * alternating maximization: each argument in turn is replaced by the exact
 * dual maximizer of its linear restriction, so the objective is monotone
 * non-decreasing and every inner step is solved in closed form. Multistart
 * with per-restart RNG streams derived from (seed, restart index); results
 * are bit-identical regardless of how restarts are scheduled. Returns
 * kind=lower_bound with the best witness (kind=exact only for the zero
 * form, which the ascent certifies by a zero best value).
 */
NormEstimate estimate_norm(const MultilinearForm& T,
                           std::span<const ExtendedExponent> exponents,
                           const AscentConfig& config = {});

/**
 * Exact sup-norm (all exponents infinite): a multilinear form on a product
 * of cubes attains its maximum at sign vertices, and the final argument is
 * resolved exactly by ell_1 duality, so enumerating sign patterns of the
 * first m-1 arguments is exhaustive. Cost 2^{n(m-1)}; refuses n(m-1) > 24.
 * The kernel walks patterns in Gray-code order inside fixed-size chunks
 * (results independent of the OpenMP worker count) and one antipodal
 * symmetry halves the enumeration.
 */
NormEstimate exact_norm_sup(const MultilinearForm& T);

// plain full-enumeration reference (no Gray walk, no symmetry, no chunking)
NormEstimate exact_norm_sup_serial(const MultilinearForm& T);

// n^{1 - (1/r_1 + ... + 1/r_k)}: the norm of the diagonal k-linear form
// sum_j x_j^(1)...x_j^(k) on ell_{r_1} x ... x ell_{r_k}; this value is both
// the Holder upper bound and attained at uniform unit vectors, hence exact.
// Requires sum 1/r_j <= 1.
double diagonal_norm_analytic(int k, std::span<const ExtendedExponent> duals, int n);

// Largest singular value of a bilinear form by power iteration on B^T B
// from a deterministic start; relative tolerance on the Rayleigh quotient.
double top_singular_value(const MultilinearForm& T, double rel_tol = 1e-10,
                          int* iterations = nullptr);

/**
 * Certified upper bound on the norm of a bilinear form over ell_p x ell_p,
 * p >= 2, by bilinear interpolation between the spectral norm (p=2) and the
 * sup-norm (p=inf): value = kappa * sigma^theta * N_inf^{1-theta} with
 * 1/p = theta/2 and kappa = 2 (a documented, conservative constant covering
 * the real-scalar interpolation step). sigma comes from power iteration at
 * relative tolerance 1e-10, inflated by (1+1e-8) to cover incomplete
 * convergence. N_inf is exact_norm_sup when n <= 24; beyond that guard it is
 * the certified bound min(n * sigma, sum |B_ij|) (Cauchy-Schwarz / triangle
 * inequality), which keeps the result an upper bound at every n.
 */
NormEstimate interpolation_upper_bound(const MultilinearForm& T, const ExtendedExponent& p);

}  // namespace hlsum
