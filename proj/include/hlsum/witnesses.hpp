#pragma once

#include "hlsum/forms.hpp"
#include "hlsum/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hlsum {

// Dual exponents r_j = p / n_j attached to the blocks of a pattern; their
// reciprocals add up to m/p. Requires p > m so that every r_j > 1.
std::vector<ExtendedExponent> block_duals(const BlockPattern& pattern, const ExtendedExponent& p);

// Diagonal k-linear form sum_j x_j^(1) ... x_j^(k): coefficient 1 on the
// joint diagonal, 0 elsewhere. Procedural; never materializes n^k entries.
MultilinearForm diagonal_kform(int k, int n);

// m-linear form supported on block-constant multi-indices whose blocked
// coefficients reproduce A: the coefficient at (j_1, ..., j_m) is
// A(i_1, ..., i_k) when block l of the pattern is identically i_l, else
// exactly 0. Its norm never exceeds the norm of A on the block-dual spaces.
MultilinearForm lift_kform(const MultilinearForm& A, const BlockPattern& pattern);

// Dense k-linear form with independent uniform +-1 coefficients drawn from
// the deterministic stream for `seed`.
MultilinearForm ksz_sample(int k, int n, std::uint64_t seed);

// (k+1)/2 - sum 1/r_j: the growth exponent of the random sign form's norm on
// ell_{r_1} x ... x ell_{r_k}. Applicability requires every 1/r_j <= 1/2.
Rational ksz_norm_exponent(int k, std::span<const ExtendedExponent> duals);

// k/r - ksz_norm_exponent: the exponent lower bound the random-sign witness
// forces on the growth rate of blocked power sums.
Rational ksz_lower_lambda(int k, const Rational& r, std::span<const ExtendedExponent> duals);

// A deterministic generator of witness forms, keyed by (tag, k) and, for
// randomized families, the seed passed to make().
class WitnessFamily {
public:
    enum class Tag { diagonal, ksz, lifted };

    static WitnessFamily diagonal(int k);
    static WitnessFamily ksz(int k);
    static WitnessFamily lifted(MultilinearForm base);  // fixed k-linear core

    Tag tag() const { return tag_; }
    int k() const { return k_; }
    const char* name() const;
    bool randomized() const { return tag_ == Tag::ksz; }

    // k-linear core at dimension n; deterministic given (parameters, seed)
    MultilinearForm make(int n, std::uint64_t seed) const;

private:
    WitnessFamily(Tag tag, int k) : tag_(tag), k_(k) {}

    Tag tag_;
    int k_;
    std::vector<MultilinearForm> base_;  // holds the fixed core for `lifted`
};

}  // namespace hlsum
