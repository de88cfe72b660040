#include "hlsum/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <limits>
#include <stdexcept>

namespace hlsum {

namespace {

constexpr std::int64_t kDenseGuard = 100'000'000;  // max dense entries
constexpr int kMaxDegree = 64;
constexpr std::int64_t kSumBlock = 8192;  // linear indices per kernel block

void check_vector_args(const MultilinearForm& form,
                       std::span<const std::vector<double>> args, std::size_t expected,
                       const char* what) {
    if (args.size() != expected) {
        throw std::domain_error(std::string(what) + ": expected " +
                                std::to_string(expected) + " vectors, got " +
                                std::to_string(args.size()));
    }
    for (const auto& v : args) {
        if (v.size() != static_cast<std::size_t>(form.dim())) {
            throw std::domain_error(std::string(what) + ": vector length " +
                                    std::to_string(v.size()) + " does not match dimension " +
                                    std::to_string(form.dim()));
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// BlockPattern

BlockPattern::BlockPattern(std::vector<int> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw std::domain_error("block pattern must have k >= 1 blocks");
    m_ = 0;
    for (int b : blocks_) {
        if (b < 1) throw std::domain_error("block sizes must be positive");
        m_ += b;
    }
    if (m_ > kMaxDegree) throw std::domain_error("block pattern degree exceeds 64");
}

BlockPattern BlockPattern::all_ones(int m) {
    if (m < 1) throw std::domain_error("degree must be positive");
    return BlockPattern(std::vector<int>(static_cast<std::size_t>(m), 1));
}

BlockPattern BlockPattern::parse(std::string_view text) {
    std::vector<int> blocks;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view piece = text.substr(pos, comma - pos);
        int value = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (ec != std::errc() || ptr != piece.data() + piece.size()) {
            throw std::invalid_argument("cannot parse block pattern from '" +
                                        std::string(text) + "'");
        }
        blocks.push_back(value);
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return BlockPattern(std::move(blocks));
}

std::string BlockPattern::str() const {
    std::string out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(blocks_[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// MultilinearForm

std::int64_t MultilinearForm::checked_dense_size(int degree, int dim) {
    if (degree < 1) throw std::domain_error("degree must be positive");
    if (dim < 1) throw std::domain_error("dimension must be positive");
    const std::int64_t size = detail::checked_pow(dim, degree, kDenseGuard);
    if (size < 0) {
        throw ResourceError("dense form would need " + std::to_string(dim) + "^" +
                            std::to_string(degree) + " > 1e8 coefficients");
    }
    return size;
}

MultilinearForm MultilinearForm::dense(int degree, int dim, std::vector<double> coefficients) {
    if (degree > kMaxDegree) throw std::domain_error("degree exceeds 64");
    const std::int64_t size = checked_dense_size(degree, dim);
    if (coefficients.size() != static_cast<std::size_t>(size)) {
        throw std::domain_error("dense coefficient array has length " +
                                std::to_string(coefficients.size()) + ", expected " +
                                std::to_string(size));
    }
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw std::domain_error("coefficients must be finite");
    }
    MultilinearForm form(degree, dim);
    form.coeffs_ = std::make_shared<const std::vector<double>>(std::move(coefficients));
    return form;
}

MultilinearForm MultilinearForm::procedural(int degree, int dim, Rule rule) {
    if (degree < 1) throw std::domain_error("degree must be positive");
    if (degree > kMaxDegree) throw std::domain_error("degree exceeds 64");
    if (dim < 1) throw std::domain_error("dimension must be positive");
    if (!rule) throw std::domain_error("procedural form needs a coefficient rule");
    MultilinearForm form(degree, dim);
    form.rule_ = std::move(rule);
    return form;
}

double MultilinearForm::coefficient(std::span<const int> index) const {
    if (index.size() != static_cast<std::size_t>(degree_)) {
        throw std::domain_error("multi-index has length " + std::to_string(index.size()) +
                                ", expected " + std::to_string(degree_));
    }
    for (int component : index) {
        if (component < 0 || component >= dim_) {
            throw std::domain_error("multi-index component " + std::to_string(component) +
                                    " out of range [0, " + std::to_string(dim_) + ")");
        }
    }
    return coefficient_unchecked(index);
}

const std::vector<double>& MultilinearForm::dense_coefficients() const {
    if (!coeffs_) throw std::logic_error("form has no dense storage");
    return *coeffs_;
}

double MultilinearForm::evaluate(std::span<const std::vector<double>> args) const {
    check_vector_args(*this, args, static_cast<std::size_t>(degree_), "evaluate");
    const int m = degree_;
    const int n = dim_;

    if (coeffs_) {
        // fold the last argument first, then contract level by level
        const std::vector<double>& src = *coeffs_;
        std::int64_t len = static_cast<std::int64_t>(src.size()) / n;
        std::vector<double> buf(static_cast<std::size_t>(std::max<std::int64_t>(len, 1)));
        const std::vector<double>& last = args[static_cast<std::size_t>(m - 1)];
        for (std::int64_t i = 0; i < len; ++i) {
            double acc = 0.0;
            const double* row = src.data() + i * n;
            for (int j = 0; j < n; ++j) acc += row[j] * last[static_cast<std::size_t>(j)];
            buf[static_cast<std::size_t>(i)] = acc;
        }
        for (int level = m - 2; level >= 0; --level) {
            len /= n;
            const std::vector<double>& x = args[static_cast<std::size_t>(level)];
            for (std::int64_t i = 0; i < len; ++i) {
                double acc = 0.0;
                const double* row = buf.data() + i * n;
                for (int j = 0; j < n; ++j) acc += row[j] * x[static_cast<std::size_t>(j)];
                buf[static_cast<std::size_t>(i)] = acc;
            }
        }
        return buf[0];
    }

    // procedural: odometer over all n^m indices
    std::array<int, kMaxDegree> index{};
    std::span<int> idx(index.data(), static_cast<std::size_t>(m));
    CompensatedSum total;
    while (true) {
        double prod = rule_(idx);
        if (prod != 0.0) {
            for (int l = 0; l < m; ++l) {
                prod *= args[static_cast<std::size_t>(l)][static_cast<std::size_t>(idx[l])];
            }
            total.add(prod);
        }
        if (!detail::increment_index(idx, n)) break;
    }
    return total.value();
}

std::vector<double> MultilinearForm::slice_vector(
    int position, std::span<const std::vector<double>> fixed) const {
    if (position < 0 || position >= degree_) {
        throw std::domain_error("slice position " + std::to_string(position) +
                                " out of range [0, " + std::to_string(degree_) + ")");
    }
    check_vector_args(*this, fixed, static_cast<std::size_t>(degree_ - 1), "slice_vector");

    const int m = degree_;
    const int n = dim_;
    std::vector<double> slice(static_cast<std::size_t>(n), 0.0);

    // odometer over the m-1 fixed slots; for each assignment add
    // prod * coefficient to every entry of the slice
    std::array<int, kMaxDegree> index{};
    std::span<int> idx(index.data(), static_cast<std::size_t>(m));
    std::array<int, kMaxDegree> fixed_index{};
    std::span<int> fidx(fixed_index.data(), static_cast<std::size_t>(m - 1));

    while (true) {
        double prod = 1.0;
        for (int l = 0, slot = 0; l < m; ++l) {
            if (l == position) continue;
            idx[l] = fidx[slot];
            prod *= fixed[static_cast<std::size_t>(slot)][static_cast<std::size_t>(fidx[slot])];
            ++slot;
        }
        if (prod != 0.0) {
            for (int i = 0; i < n; ++i) {
                idx[position] = i;
                slice[static_cast<std::size_t>(i)] += prod * coefficient_unchecked(idx);
            }
        }
        if (m == 1 || !detail::increment_index(fidx, n)) break;
    }
    return slice;
}

double MultilinearForm::blocked_coefficient(const BlockPattern& pattern,
                                            std::span<const int> index) const {
    if (pattern.m() != degree_) {
        throw std::domain_error("block pattern degree " + std::to_string(pattern.m()) +
                                " does not match form degree " + std::to_string(degree_));
    }
    if (index.size() != static_cast<std::size_t>(pattern.k())) {
        throw std::domain_error("blocked index has length " + std::to_string(index.size()) +
                                ", expected k = " + std::to_string(pattern.k()));
    }
    std::array<int, kMaxDegree> expanded{};
    int pos = 0;
    for (int l = 0; l < pattern.k(); ++l) {
        const int i = index[static_cast<std::size_t>(l)];
        if (i < 0 || i >= dim_) {
            throw std::domain_error("blocked index component " + std::to_string(i) +
                                    " out of range [0, " + std::to_string(dim_) + ")");
        }
        for (int t = 0; t < pattern.block(l); ++t) expanded[static_cast<std::size_t>(pos++)] = i;
    }
    return coefficient_unchecked(std::span<const int>(expanded.data(), static_cast<std::size_t>(degree_)));
}

MultilinearForm MultilinearForm::scaled(double factor) const {
    if (!std::isfinite(factor)) throw std::domain_error("scale factor must be finite");
    if (coeffs_) {
        std::vector<double> scaled_coeffs(*coeffs_);
        for (double& c : scaled_coeffs) c *= factor;
        return dense(degree_, dim_, std::move(scaled_coeffs));
    }
    Rule base = rule_;
    return procedural(degree_, dim_, [base, factor](std::span<const int> idx) {
        return factor * base(idx);
    });
}

// ---------------------------------------------------------------------------
// blocked power sums

namespace detail {

std::int64_t checked_pow(int base, int exponent, std::int64_t limit) {
    std::int64_t v = 1;
    for (int i = 0; i < exponent; ++i) {
        if (v > limit / base) return -1;
        v *= base;
    }
    return v;
}

void decode_index(std::int64_t linear, int dim, std::span<int> out) {
    for (std::size_t pos = out.size(); pos-- > 0;) {
        out[pos] = static_cast<int>(linear % dim);
        linear /= dim;
    }
}

bool increment_index(std::span<int> index, int dim) {
    for (std::size_t pos = index.size(); pos-- > 0;) {
        if (++index[pos] < dim) return true;
        index[pos] = 0;
    }
    return false;
}

}  // namespace detail

// expand-and-query without revalidation; kernels iterate validated ranges
static double blocked_at(const MultilinearForm& form, const BlockPattern& pattern,
                         std::span<const int> index) {
    std::array<int, 64> expanded{};
    int pos = 0;
    for (int l = 0; l < pattern.k(); ++l) {
        for (int t = 0; t < pattern.block(l); ++t) {
            expanded[static_cast<std::size_t>(pos++)] = index[static_cast<std::size_t>(l)];
        }
    }
    return form.coefficient_unchecked(
        std::span<const int>(expanded.data(), static_cast<std::size_t>(pattern.m())));
}

static void validate_power_sum_args(const MultilinearForm& form, const BlockPattern& pattern,
                                    double r) {
    if (!(r > 0.0)) throw std::domain_error("power sum exponent r must be positive");
    if (pattern.m() != form.degree()) {
        throw std::domain_error("block pattern degree " + std::to_string(pattern.m()) +
                                " does not match form degree " + std::to_string(form.degree()));
    }
}

double blocked_power_sum(const MultilinearForm& form, const BlockPattern& pattern, double r) {
    validate_power_sum_args(form, pattern, r);
    const int n = form.dim();
    const int k = pattern.k();
    const std::int64_t total = detail::checked_pow(n, k, std::numeric_limits<std::int64_t>::max() / 2);
    if (total < 0) throw ResourceError("blocked power sum over n^k tuples overflows");

    const bool flat_dense = form.is_dense() && k == pattern.m();
    const double* flat = flat_dense ? form.dense_coefficients().data() : nullptr;

    const std::int64_t nblocks = (total + kSumBlock - 1) / kSumBlock;

    // pass 1: largest magnitude (exact max; order-independent)
    std::vector<double> block_max(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t begin = b * kSumBlock;
        const std::int64_t end = std::min(total, begin + kSumBlock);
        double local = 0.0;
        if (flat) {
            for (std::int64_t i = begin; i < end; ++i) {
                local = std::max(local, std::abs(flat[i]));
            }
        } else {
            std::array<int, 64> index{};
            std::span<int> idx(index.data(), static_cast<std::size_t>(k));
            detail::decode_index(begin, n, idx);
            for (std::int64_t i = begin; i < end; ++i) {
                local = std::max(local, std::abs(blocked_at(form, pattern, idx)));
                detail::increment_index(idx, n);
            }
        }
        block_max[static_cast<std::size_t>(b)] = local;
    }
    double scale = 0.0;
    for (double v : block_max) scale = std::max(scale, v);
    if (scale == 0.0) return 0.0;

    // pass 2: compensated sum of (|c|/scale)^r per block, blocks combined in
    // index order so the result does not depend on the worker count
    std::vector<CompensatedSum> block_sum(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t begin = b * kSumBlock;
        const std::int64_t end = std::min(total, begin + kSumBlock);
        CompensatedSum local;
        if (flat) {
            for (std::int64_t i = begin; i < end; ++i) {
                const double t = std::abs(flat[i]) / scale;
                if (t != 0.0) local.add(std::pow(t, r));
            }
        } else {
            std::array<int, 64> index{};
            std::span<int> idx(index.data(), static_cast<std::size_t>(k));
            detail::decode_index(begin, n, idx);
            for (std::int64_t i = begin; i < end; ++i) {
                const double t = std::abs(blocked_at(form, pattern, idx)) / scale;
                if (t != 0.0) local.add(std::pow(t, r));
                detail::increment_index(idx, n);
            }
        }
        block_sum[static_cast<std::size_t>(b)] = local;
    }
    CompensatedSum sum;
    for (const CompensatedSum& s : block_sum) sum.add(s.value());
    return scale * std::pow(sum.value(), 1.0 / r);
}

double blocked_power_sum_serial(const MultilinearForm& form, const BlockPattern& pattern,
                                double r) {
    validate_power_sum_args(form, pattern, r);
    const int n = form.dim();
    const int k = pattern.k();
    std::array<int, 64> index{};
    std::span<int> idx(index.data(), static_cast<std::size_t>(k));
    CompensatedSum sum;
    while (true) {
        const double c = std::abs(blocked_at(form, pattern, idx));
        if (c != 0.0) sum.add(std::pow(c, r));
        if (!detail::increment_index(idx, n)) break;
    }
    return std::pow(sum.value(), 1.0 / r);
}

}  // namespace hlsum
