#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hlsum {

// Exact rational arithmetic over arbitrary-precision integers. Exponent
// formulas must test numerators against zero exactly, so nothing in the
// theory layer is allowed to round.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline std::int64_t to_int64_checked(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("rational component exceeds 64-bit range");
    }
    return v.template convert_to<std::int64_t>();
}

inline std::string to_string(const Rational& q) {
    const BigInt num = numerator(q);
    const BigInt den = denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Accepts "3", "-4/3" and plain decimals such as "1.5" (converted exactly).
Rational parse_rational(std::string_view text);

/**
 * An exponent value in [1, inf]. Infinity is first-class so the sup-norm
 * case needs no side-channel encoding; formulas evaluated at an infinite
 * exponent take their exact limits (terms with the exponent in a
 * denominator vanish).
 */
class ExtendedExponent {
public:
    ExtendedExponent(const Rational& v) : finite_(v) {
        if (v < 1) throw std::domain_error("exponent must be >= 1 or inf");
    }
    ExtendedExponent(int v) : ExtendedExponent(Rational(v)) {}
    ExtendedExponent(long long v) : ExtendedExponent(Rational(v)) {}

    static ExtendedExponent infinity() {
        ExtendedExponent e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }

    const Rational& value() const {
        if (infinite_) throw std::logic_error("infinite exponent has no finite value");
        return finite_;
    }

    // 1/q as an exact rational; inf -> 0. Always finite, in [0, 1].
    Rational reciprocal() const {
        return infinite_ ? Rational(0) : Rational(1) / finite_;
    }

    double as_double() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : to_double(finite_);
    }

    std::string str() const { return infinite_ ? "inf" : to_string(finite_); }

    friend bool operator==(const ExtendedExponent& a, const ExtendedExponent& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.finite_ == b.finite_;
    }
    friend bool operator<(const ExtendedExponent& a, const ExtendedExponent& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.finite_ < b.finite_;
    }
    friend bool operator<=(const ExtendedExponent& a, const ExtendedExponent& b) {
        return a == b || a < b;
    }
    friend bool operator>(const ExtendedExponent& a, const ExtendedExponent& b) { return b < a; }
    friend bool operator>=(const ExtendedExponent& a, const ExtendedExponent& b) { return b <= a; }

    friend bool operator==(const ExtendedExponent& a, const Rational& b) {
        return !a.infinite_ && a.finite_ == b;
    }
    friend bool operator<(const ExtendedExponent& a, const Rational& b) {
        return !a.infinite_ && a.finite_ < b;
    }
    friend bool operator<=(const ExtendedExponent& a, const Rational& b) {
        return !a.infinite_ && a.finite_ <= b;
    }
    friend bool operator>(const ExtendedExponent& a, const Rational& b) { return !(a <= b); }
    friend bool operator>=(const ExtendedExponent& a, const Rational& b) { return !(a < b); }

private:
    ExtendedExponent() = default;
    Rational finite_{1};
    bool infinite_ = false;
};

// "inf" (case-insensitive) or anything parse_rational accepts.
ExtendedExponent parse_exponent(std::string_view text);

}  // namespace hlsum
