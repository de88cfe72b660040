#include "hlsum/witnesses.hpp"

#include "hlsum/rng.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace hlsum {

std::vector<ExtendedExponent> block_duals(const BlockPattern& pattern, const ExtendedExponent& p) {
    if (p <= Rational(pattern.m())) {
        throw std::domain_error("block duals require p > m; got p = " + p.str() + ", m = " +
                                std::to_string(pattern.m()));
    }
    std::vector<ExtendedExponent> duals;
    duals.reserve(static_cast<std::size_t>(pattern.k()));
    for (int block : pattern.blocks()) {
        if (p.is_infinite()) {
            duals.push_back(ExtendedExponent::infinity());
        } else {
            duals.push_back(ExtendedExponent(Rational(p.value() / block)));
        }
    }
    return duals;
}

MultilinearForm diagonal_kform(int k, int n) {
    return MultilinearForm::procedural(k, n, [](std::span<const int> index) {
        for (std::size_t l = 1; l < index.size(); ++l) {
            if (index[l] != index[0]) return 0.0;
        }
        return 1.0;
    });
}

MultilinearForm lift_kform(const MultilinearForm& A, const BlockPattern& pattern) {
    if (A.degree() != pattern.k()) {
        throw std::domain_error("lift needs a core of degree k = " + std::to_string(pattern.k()) +
                                ", got degree " + std::to_string(A.degree()));
    }
    const std::vector<int> blocks = pattern.blocks();
    return MultilinearForm::procedural(
        pattern.m(), A.dim(), [A, blocks](std::span<const int> index) {
            // off the block-constant set the coefficient is exactly 0
            std::array<int, 64> core{};
            std::size_t pos = 0;
            for (std::size_t l = 0; l < blocks.size(); ++l) {
                const int representative = index[pos];
                for (int t = 0; t < blocks[l]; ++t) {
                    if (index[pos++] != representative) return 0.0;
                }
                core[l] = representative;
            }
            return A.coefficient_unchecked(
                std::span<const int>(core.data(), blocks.size()));
        });
}

MultilinearForm ksz_sample(int k, int n, std::uint64_t seed) {
    const std::int64_t size = MultilinearForm::checked_dense_size(k, n);
    SplitMix64 rng(seed);
    std::vector<double> coefficients(static_cast<std::size_t>(size));
    for (double& c : coefficients) c = rng.next_sign();
    return MultilinearForm::dense(k, n, std::move(coefficients));
}

Rational ksz_norm_exponent(int k, std::span<const ExtendedExponent> duals) {
    if (duals.size() != static_cast<std::size_t>(k)) {
        throw std::domain_error("expected " + std::to_string(k) + " dual exponents, got " +
                                std::to_string(duals.size()));
    }
    Rational reciprocal_sum(0);
    for (const ExtendedExponent& r : duals) {
        const Rational recip = r.reciprocal();
        if (recip > Rational(1, 2)) {
            throw std::domain_error("random-sign norm exponent needs every 1/r_j <= 1/2; got r_j = " +
                                    r.str());
        }
        reciprocal_sum += recip;
    }
    return Rational(k + 1, 2) - reciprocal_sum;
}

Rational ksz_lower_lambda(int k, const Rational& r, std::span<const ExtendedExponent> duals) {
    if (!(r > 0)) throw std::domain_error("exponent r must be positive");
    return Rational(Rational(k) / r) - ksz_norm_exponent(k, duals);
}

const char* WitnessFamily::name() const {
    switch (tag_) {
        case Tag::diagonal: return "diagonal";
        case Tag::ksz: return "ksz";
        case Tag::lifted: return "lifted";
    }
    return "unknown";
}

WitnessFamily WitnessFamily::diagonal(int k) {
    if (k < 1) throw std::domain_error("witness family needs k >= 1");
    return WitnessFamily(Tag::diagonal, k);
}

WitnessFamily WitnessFamily::ksz(int k) {
    if (k < 1) throw std::domain_error("witness family needs k >= 1");
    return WitnessFamily(Tag::ksz, k);
}

WitnessFamily WitnessFamily::lifted(MultilinearForm base) {
    WitnessFamily family(Tag::lifted, base.degree());
    family.base_.push_back(std::move(base));
    return family;
}

MultilinearForm WitnessFamily::make(int n, std::uint64_t seed) const {
    switch (tag_) {
        case Tag::diagonal:
            return diagonal_kform(k_, n);
        case Tag::ksz:
            return ksz_sample(k_, n, seed);
        case Tag::lifted:
            if (base_.front().dim() != n) {
                throw std::domain_error("lifted family core has dimension " +
                                        std::to_string(base_.front().dim()) +
                                        ", requested n = " + std::to_string(n));
            }
            return base_.front();
    }
    throw std::logic_error("unreachable");
}

}  // namespace hlsum
