#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace hlsum {

// splitmix64 finalizer (Vigna). Pure bit mixing, identical on every
// platform and compiler; all seeding in this project goes through it.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Stable avalanche mix of (base, n, sample, tag). Equal inputs give equal
// outputs on every platform and in every version of this library; the exact
// chain below is part of the file-format contract for experiment artifacts,
// do not change it.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n,
                                 std::uint64_t sample, std::string_view tag) {
    std::uint64_t h = mix64(base + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (n * 0x9e3779b97f4a7c15ULL + 0xbf58476d1ce4e5b9ULL));
    h = mix64(h ^ (sample * 0x94d049bb133111ebULL + 0x2545f4914f6cdd1dULL));
    h = mix64(h ^ fnv1a64(tag));
    return h;
}

// Deterministic stream generator built on the splitmix64 step function.
// Used instead of <random> engines+distributions because distribution
// algorithms are not pinned by the C++ standard and experiment artifacts
// must be byte-stable.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // uniform in [0, 1), 53 random bits
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]
    double next_unit_open() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_sign() { return (next() >> 63) ? -1.0 : 1.0; }

    // standard normal via Box-Muller; generates pairs and caches the partner
    double next_gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace hlsum
