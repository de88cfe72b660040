#pragma once

#include "hlsum/errors.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hlsum {

// Partition (n_1,...,n_k) of the argument slots of an m-linear form: inside
// block j the basis index is repeated n_j times.
class BlockPattern {
public:
    explicit BlockPattern(std::vector<int> blocks);

    static BlockPattern all_ones(int m);
    static BlockPattern parse(std::string_view text);  // "2,1"

    int k() const { return static_cast<int>(blocks_.size()); }
    int m() const { return m_; }
    int block(int j) const { return blocks_[static_cast<std::size_t>(j)]; }
    const std::vector<int>& blocks() const { return blocks_; }
    std::string str() const;

    friend bool operator==(const BlockPattern&, const BlockPattern&) = default;

private:
    std::vector<int> blocks_;
    int m_ = 0;
};

/**
 * An m-linear form on (R^n)^m held as a coefficient source: either a dense
 * row-major tensor of n^m doubles or a procedural rule. Procedural forms
 * never materialize n^m entries, which keeps sparse witness families cheap
 * at large n. Forms are immutable after construction; every query is pure,
 * so a form can be shared freely across threads.
 *
 * Indices in this API are 0-based; file formats and the CLI are 1-based.
 */
class MultilinearForm {
public:
    using Rule = std::function<double(std::span<const int>)>;

    static MultilinearForm dense(int degree, int dim, std::vector<double> coefficients);
    static MultilinearForm procedural(int degree, int dim, Rule rule);

    int degree() const { return degree_; }
    int dim() const { return dim_; }
    bool is_dense() const { return static_cast<bool>(coeffs_); }

    // T(e_{j_1},...,e_{j_m}); bounds-checked
    double coefficient(std::span<const int> index) const;

    // sum over all multi-indices of coefficient * product of argument entries
    double evaluate(std::span<const std::vector<double>> args) const;

    // c with c_i = T(fixed_1,...,e_i,...,fixed_{m-1}), e_i inserted at
    // `position`; satisfies evaluate(T, args) = <c, x_position>
    std::vector<double> slice_vector(int position,
                                     std::span<const std::vector<double>> fixed) const;

    // coefficient at the m-index that repeats index[l] exactly pattern[l] times
    double blocked_coefficient(const BlockPattern& pattern, std::span<const int> index) const;

    MultilinearForm scaled(double factor) const;

    // raw dense storage; throws for procedural forms
    const std::vector<double>& dense_coefficients() const;

    // n^m, or a ResourceError when it exceeds the dense-size guard (1e8)
    static std::int64_t checked_dense_size(int degree, int dim);

    // unchecked accessor used by the inner kernels (index already validated)
    double coefficient_unchecked(std::span<const int> index) const {
        if (coeffs_) return (*coeffs_)[static_cast<std::size_t>(flat_index(index))];
        return rule_(index);
    }

    std::int64_t flat_index(std::span<const int> index) const {
        std::int64_t flat = 0;
        for (int component : index) flat = flat * dim_ + component;
        return flat;
    }

private:
    MultilinearForm(int degree, int dim) : degree_(degree), dim_(dim) {}

    int degree_ = 0;
    int dim_ = 0;
    std::shared_ptr<const std::vector<double>> coeffs_;  // dense storage
    Rule rule_;                                          // procedural storage
};

// (sum over {1..n}^k of |blocked coefficient|^r)^(1/r). OpenMP kernel with a
// fixed block decomposition: results are byte-identical for any worker
// count. Accumulation is Neumaier-compensated and scaled by the largest
// magnitude, so small r does not lose precision.
double blocked_power_sum(const MultilinearForm& form, const BlockPattern& pattern, double r);

// serial reference kept for cross-checking the kernel (plain compensated loop)
double blocked_power_sum_serial(const MultilinearForm& form, const BlockPattern& pattern,
                                double r);

// Neumaier-compensated accumulator
struct CompensatedSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            compensation += (sum - t) + x;
        } else {
            compensation += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + compensation; }
};

namespace detail {
// odometer helpers over {0..n-1}^len, last digit fastest (row-major order)
void decode_index(std::int64_t linear, int dim, std::span<int> out);
bool increment_index(std::span<int> index, int dim);
std::int64_t checked_pow(int base, int exponent, std::int64_t limit);
}  // namespace detail

}  // namespace hlsum
