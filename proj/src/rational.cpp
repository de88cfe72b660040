#include "hlsum/rational.hpp"

#include <algorithm>
#include <cctype>

namespace hlsum {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

BigInt parse_bigint(std::string_view s, std::string_view original) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw std::invalid_argument("cannot parse rational from '" + std::string(original) + "'");
    }
    BigInt v{std::string(s)};
    return negative ? -v : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw std::invalid_argument("cannot parse rational from empty string");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_bigint(s.substr(0, slash), text);
        const BigInt den = parse_bigint(s.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("rational denominator is zero in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view head = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if (!all_digits(frac)) {
            throw std::invalid_argument("cannot parse rational from '" + std::string(text) + "'");
        }
        bool negative = !head.empty() && head.front() == '-';
        const BigInt whole = head.empty() || head == "-" || head == "+"
                                 ? BigInt(0)
                                 : parse_bigint(head, text);
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt digits{std::string(frac)};
        BigInt num = BigInt(abs(whole) * scale) + digits;
        if (negative) num = -num;
        return Rational(num, scale);
    }
    return Rational(parse_bigint(s, text));
}

ExtendedExponent parse_exponent(std::string_view text) {
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "inf" || lowered == "infinity" || lowered == "oo") {
        return ExtendedExponent::infinity();
    }
    return ExtendedExponent(parse_rational(text));
}

}  // namespace hlsum
