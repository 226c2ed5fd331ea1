#pragma once

#include "fieldint/field.hpp"
#include "fieldint/rng.hpp"

namespace fieldint {

// N classical bits sent one at a time; each starts at 0 and flips to 1 with
// probability 1 - exp(-lambda * I), never flipping back.
struct ClassicalConfig {
    double lambda;
    int n_bits;
    MagnitudeScale scale;

    // The default coupling 1.2/M minimizes the estimator spread at I = M to
    // within a few percent; see optimize_lambda for the exact minimizer.
    static ClassicalConfig for_scale(MagnitudeScale scale, int n_bits);

    void validate() const;
};

struct ClassicalEstimate {
    int flip_count = 0;
    double p_hat = 0.0;  // flip_count / n_bits, unclamped
    double i_hat = 0.0;
    bool clamped = false;
};

// 1 - exp(-lambda * I). Throws std::domain_error for I < 0: the classical
// protocol assumes a non-negative field.
double flip_probability(double integral, double lambda);

// Sends n_bits carriers; each bit i draws from its own substream(i) of a
// fork of rng, so the count is reproducible regardless of evaluation order.
int simulate_bits(double integral, const ClassicalConfig& cfg, RngStream& rng);

// Maximum-likelihood inversion of the flip probability. flip_count == n_bits
// would invert to infinity; the rate is clamped to (N - 1/2)/N and flagged.
ClassicalEstimate estimate_integral(int flip_count, const ClassicalConfig& cfg);

// Predicted estimator spread: sqrt(exp(lambda*I) - 1) / (lambda * sqrt(N)).
double uncertainty(double integral, double lambda, int n_bits);

// Minimizes uncertainty(M, lambda, n_bits) over lambda by golden-section
// search to 1e-9 relative. The minimizer satisfies x*e^x = 2(e^x - 1) with
// x = lambda*M, i.e. lambda* ~= 1.5936/M; note this differs from the 1.2/M
// default, which sits within 5% of the minimum value.
double optimize_lambda(double m_scale, int n_bits);

// Baseline where the N bits travel together as a counter registering up to
// 2^N counts. Counts are Poisson with mean c*I, c = 2^N / (guard * M), so
// the mean saturates the register at I = guard * M.
struct CounterConfig {
    int n_bits;
    double guard;
    MagnitudeScale scale;

    void validate() const;
};

double counter_baseline(double integral, const CounterConfig& cfg, RngStream& rng);

} // namespace fieldint
