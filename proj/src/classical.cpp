#include "fieldint/classical.hpp"

#include <cmath>
#include <stdexcept>

namespace fieldint {

ClassicalConfig ClassicalConfig::for_scale(MagnitudeScale scale, int n_bits) {
    ClassicalConfig cfg{1.2 / scale.value, n_bits, scale};
    cfg.validate();
    return cfg;
}

void ClassicalConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("classical: lambda must be positive");
    }
    if (n_bits < 1) {
        throw std::invalid_argument("classical: n_bits must be >= 1");
    }
}

double flip_probability(double integral, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("flip_probability: lambda must be positive");
    }
    if (integral < 0.0) {
        throw std::domain_error("flip_probability: negative integral in classical mode");
    }
    return -std::expm1(-lambda * integral);
}

int simulate_bits(double integral, const ClassicalConfig& cfg, RngStream& rng) {
    cfg.validate();
    const double p = flip_probability(integral, cfg.lambda);
    RngStream bits = rng.split();
    int flips = 0;
    for (int i = 0; i < cfg.n_bits; ++i) {
        if (bits.substream(static_cast<std::uint64_t>(i)).bernoulli(p)) {
            ++flips;
        }
    }
    return flips;
}

ClassicalEstimate estimate_integral(int flip_count, const ClassicalConfig& cfg) {
    cfg.validate();
    if (flip_count < 0 || flip_count > cfg.n_bits) {
        throw std::invalid_argument("estimate_integral: flip_count out of range");
    }
    const double n = static_cast<double>(cfg.n_bits);
    ClassicalEstimate est;
    est.flip_count = flip_count;
    est.p_hat = static_cast<double>(flip_count) / n;
    est.clamped = flip_count == cfg.n_bits;
    const double p_used = est.clamped ? (n - 0.5) / n : est.p_hat;
    // + 0.0 normalizes the -0.0 that the flip_count == 0 branch produces
    est.i_hat = -std::log1p(-p_used) / cfg.lambda + 0.0;
    return est;
}

double uncertainty(double integral, double lambda, int n_bits) {
    if (!(lambda > 0.0) || n_bits < 1 || integral < 0.0) {
        throw std::invalid_argument("uncertainty: need lambda > 0, N >= 1, I >= 0");
    }
    return std::sqrt(std::expm1(lambda * integral)) / (lambda * std::sqrt(static_cast<double>(n_bits)));
}

double optimize_lambda(double m_scale, int n_bits) {
    if (!(m_scale > 0.0)) {
        throw std::invalid_argument("optimize_lambda: M must be positive");
    }
    // Golden-section search on a bracket that always contains the minimum:
    // uncertainty diverges at both lambda -> 0 and lambda -> inf.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 1e-3 / m_scale;
    double hi = 20.0 / m_scale;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = uncertainty(m_scale, a, n_bits);
    double fb = uncertainty(m_scale, b, n_bits);
    while (hi - lo > 1e-9 * 0.5 * (lo + hi)) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = uncertainty(m_scale, a, n_bits);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = uncertainty(m_scale, b, n_bits);
        }
    }
    return 0.5 * (lo + hi);
}

void CounterConfig::validate() const {
    if (n_bits < 1) {
        throw std::invalid_argument("counter: n_bits must be >= 1");
    }
    if (n_bits > 40) {
        throw std::invalid_argument("counter: count range overflows double precision beyond N = 40");
    }
    if (!(guard >= 1.0)) {
        throw std::invalid_argument("counter: guard must be >= 1");
    }
}

double counter_baseline(double integral, const CounterConfig& cfg, RngStream& rng) {
    cfg.validate();
    if (integral < 0.0) {
        throw std::domain_error("counter_baseline: negative integral in classical mode");
    }
    const double counts_per_unit = std::ldexp(1.0, cfg.n_bits) / (cfg.guard * cfg.scale.value);
    const double mean = counts_per_unit * integral;
    const std::int64_t count = rng.poisson(mean);
    return static_cast<double>(count) / counts_per_unit;
}

} // namespace fieldint
