#include "fieldint/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fieldint {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

} // namespace

RngStream RngStream::substream(std::uint64_t label) const {
    return RngStream(mix(state_ ^ (mix(label) + kGolden)));
}

RngStream RngStream::split() {
    return RngStream(mix(next_u64() + kGolden));
}

std::uint64_t RngStream::next_u64() {
    state_ += kGolden;
    return mix(state_);
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0)) {
        throw std::domain_error("poisson: mean must be non-negative");
    }
    if (mean == 0.0) {
        return 0;
    }
    if (mean < 10.0) {
        // sequential inversion
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double term = limit;
        double cdf = limit;
        const double u = next_double();
        while (u > cdf) {
            ++k;
            term *= mean / static_cast<double>(k);
            cdf += term;
            if (k > 2000) {
                break; // cdf numerically saturated
            }
        }
        return k;
    }

    // PTRD (Hormann 1993), exact for any large mean.
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    for (;;) {
        double u = next_double() - 0.5;
        double v = next_double();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) {
            return static_cast<std::int64_t>(kf);
        }
        if (kf < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) {
            return static_cast<std::int64_t>(kf);
        }
    }
}

} // namespace fieldint
