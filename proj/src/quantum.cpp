#include "fieldint/quantum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fieldint {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_angle(double theta) {
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) {
        theta += kTwoPi;
    }
    return theta;
}

// Plus probability of an x measurement; the one place the Born rule lives.
double plus_probability(double theta) {
    const double c = std::cos(0.5 * theta);
    return c * c;
}

} // namespace

const char* quantum_mode_name(QuantumMode mode) {
    switch (mode) {
    case QuantumMode::MethodI:
        return "method-i";
    case QuantumMode::MethodII:
        return "method-ii";
    case QuantumMode::Combined:
        return "combined";
    case QuantumMode::GhParity:
        return "gh-parity";
    }
    return "?";
}

QuantumConfig QuantumConfig::with_derived_alpha(MagnitudeScale scale, int n_qubits, int n0,
                                                double guard, QuantumMode mode) {
    QuantumConfig cfg{choose_alpha(scale.value, n_qubits, n0, guard), n_qubits, n0, guard,
                      scale, mode};
    cfg.validate();
    return cfg;
}

void QuantumConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("quantum: alpha must be positive");
    }
    if (n_qubits < 1) {
        throw std::invalid_argument("quantum: n_qubits must be >= 1");
    }
    if (n0 < 0 || n0 >= n_qubits) {
        throw std::invalid_argument("quantum: need 0 <= n0 < n_qubits");
    }
    if (!(guard >= 1.0)) {
        throw std::invalid_argument("quantum: guard must be >= 1");
    }
    const bool uses_ladder = mode == QuantumMode::MethodII || mode == QuantumMode::Combined;
    if (uses_ladder && ladder_steps() > 40) {
        throw std::invalid_argument("quantum: more than 40 ladder steps exceeds double-precision phase reduction");
    }
    if (mode == QuantumMode::Combined && n0 < 2) {
        throw std::invalid_argument("quantum: combined mode needs n0 >= 2 remainder qubits");
    }
}

PlanarSpin precess(PlanarSpin spin, double angle) {
    return PlanarSpin{normalize_angle(spin.theta + angle)};
}

SpinOutcome measure_x(const PlanarSpin& spin, RngStream& rng) {
    return rng.bernoulli(plus_probability(spin.theta)) ? SpinOutcome::Plus : SpinOutcome::Minus;
}

Parity gh_parity(double integral, double alpha, RngStream& rng) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("gh_parity: alpha must be positive");
    }
    // Coupling: I = alpha rotates by pi, so the spin angle is
    // (I/alpha mod 2) half-turns.
    const double turns = reduced_ratio_mod(integral, alpha, 2.0);
    PlanarSpin spin = precess(PlanarSpin{}, turns * kPi);
    return measure_x(spin, rng) == SpinOutcome::Plus ? Parity::Even : Parity::Odd;
}

double correction_angle(const std::vector<std::uint8_t>& digits, int k, double beta_hat,
                        double alpha) {
    if (k < 1) {
        throw std::invalid_argument("correction_angle: k must be >= 1");
    }
    if (digits.size() != static_cast<std::size_t>(k - 1)) {
        throw std::invalid_argument("correction_angle: need exactly k-1 digits");
    }
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("correction_angle: alpha must be positive");
    }
    double dyadic = 0.0; // sum of d(i)/2^(k-i), exact: distinct binary digits
    for (int i = 1; i < k; ++i) {
        if (digits[static_cast<std::size_t>(i - 1)]) {
            dyadic += std::ldexp(1.0, i - k);
        }
    }
    return -kPi * dyadic - kPi * beta_hat / std::ldexp(alpha, k - 1);
}

double choose_alpha(double m_scale, int n_qubits, int n0, double guard) {
    if (!(m_scale > 0.0) || !(guard > 0.0)) {
        throw std::invalid_argument("choose_alpha: M and guard must be positive");
    }
    if (n0 < 0 || n_qubits <= n0) {
        throw std::invalid_argument("choose_alpha: need N > N0 >= 0");
    }
    const double alpha = std::ldexp(guard * m_scale, -(n_qubits - n0));
    if (alpha < std::ldexp(m_scale, -46)) {
        throw std::runtime_error("choose_alpha: alpha below 2^-46 * M; phase reduction would lose the digits");
    }
    return alpha;
}

double reduced_ratio_mod(double value, double unit, double period) {
    const double t = value / unit;
    if (!std::isfinite(t) || std::abs(t) > 0x1p52) {
        throw std::runtime_error("reduced_ratio_mod: ratio too large for exact reduction");
    }
    // q*period is an exact integer multiple below t; fma removes it from
    // value in one rounding, so the residue keeps full precision even when
    // t is ~1e8.
    const double q = std::floor(t / period);
    double s = std::fma(-(q * period), unit, value) / unit;
    while (s < 0.0) {
        s += period;
    }
    while (s >= period) {
        s -= period;
    }
    return s;
}

double ladder_step_turns(double effective_integral, double alpha, int k,
                         std::uint64_t m_prefix) {
    if (k < 1 || k > 53) {
        throw std::invalid_argument("ladder_step_turns: bad step index");
    }
    const double unit = std::ldexp(alpha, k - 1);
    double turns = reduced_ratio_mod(effective_integral, unit, 2.0);
    // Digit correction sum_{i<k} d(i)/2^(k-i) = m_prefix/2^(k-1): exact dyadic.
    turns -= std::ldexp(static_cast<double>(m_prefix), 1 - k);
    if (turns < 0.0) {
        turns += 2.0;
    }
    return turns;
}

double ladder_step_plus_probability(double effective_integral, double alpha, int k,
                                    std::uint64_t m_prefix) {
    return plus_probability(ladder_step_turns(effective_integral, alpha, k, m_prefix) * kPi);
}

DigitReadout run_method_II(double integral, const QuantumConfig& cfg, double beta_hat,
                           RngStream& rng, bool record_steps) {
    cfg.validate();
    const int n_steps = cfg.ladder_steps();
    const double alpha = cfg.alpha;
    const double effective = integral - beta_hat;

    DigitReadout out;
    out.alpha = alpha;
    out.beta_hat = beta_hat;
    out.digits.reserve(static_cast<std::size_t>(n_steps));
    if (record_steps) {
        out.steps.reserve(static_cast<std::size_t>(n_steps));
    }

    std::uint64_t m = 0;
    for (int k = 1; k <= n_steps; ++k) {
        const double turns = ladder_step_turns(effective, alpha, k, m);
        PlanarSpin spin = precess(PlanarSpin{}, turns * kPi);
        if (record_steps) {
            out.steps.push_back(LadderStep{k, k - 1, correction_angle(out.digits, k, beta_hat, alpha),
                                           spin.theta});
        }
        const std::uint8_t digit = measure_x(spin, rng) == SpinOutcome::Minus ? 1 : 0;
        out.digits.push_back(digit);
        if (digit) {
            m |= std::uint64_t{1} << (k - 1);
        }
    }
    out.m_hat = m;
    out.i_tilde = static_cast<double>(m) * alpha + beta_hat;
    return out;
}

double method_I_estimate(double integral, double range_max, int n_qubits, RngStream& rng) {
    if (n_qubits < 2) {
        throw std::invalid_argument("method_I_estimate: need at least 2 qubits");
    }
    if (!(range_max > 0.0)) {
        throw std::invalid_argument("method_I_estimate: range_max must be positive");
    }
    const double turns = reduced_ratio_mod(integral, range_max, 1.0); // full turn per range_max
    const PlanarSpin precessed = precess(PlanarSpin{}, turns * kTwoPi);

    const int n_x = (n_qubits + 1) / 2;
    const int n_y = n_qubits - n_x;
    long sum_cos = 0;
    for (int i = 0; i < n_x; ++i) {
        sum_cos += measure_x(precessed, rng) == SpinOutcome::Plus ? 1 : -1;
    }
    long sum_sin = 0;
    for (int i = 0; i < n_y; ++i) {
        // y measurement: quarter-turn back, then measure along x.
        sum_sin += measure_x(precess(precessed, -0.5 * kPi), rng) == SpinOutcome::Plus ? 1 : -1;
    }
    const double c_hat = static_cast<double>(sum_cos) / n_x;
    const double s_hat = static_cast<double>(sum_sin) / n_y;
    double theta_hat = std::atan2(s_hat, c_hat);
    if (theta_hat < 0.0) {
        theta_hat += kTwoPi;
    }
    return theta_hat * range_max / kTwoPi;
}

DigitReadout run_combined(double integral, const QuantumConfig& cfg, RngStream& rng) {
    cfg.validate();
    if (cfg.mode != QuantumMode::Combined) {
        throw std::invalid_argument("run_combined: config mode must be combined");
    }
    const double beta_hat = method_I_estimate(integral, cfg.alpha, cfg.n0, rng);
    return run_method_II(integral, cfg, beta_hat, rng);
}

double readout_probability(double i_tilde, double integral, double alpha, int n_qubits) {
    if (!(alpha > 0.0) || n_qubits < 1) {
        throw std::invalid_argument("readout_probability: need alpha > 0 and N >= 1");
    }
    const double delta = integral - i_tilde;
    double p = 1.0;
    for (int k = 1; k <= n_qubits; ++k) {
        const double x = reduced_ratio_mod(delta, std::ldexp(alpha, k), 1.0);
        const double c = std::cos(kPi * x); // cos^2(pi x) has period 1
        p *= c * c;
    }
    return p;
}

double error_probability(double delta_i, double m_scale, int n_qubits, double guard) {
    if (!(guard * m_scale > 0.0) || n_qubits < 1) {
        throw std::invalid_argument("error_probability: need guard*M > 0 and N >= 1");
    }
    double p = 1.0;
    for (int k = 1; k <= n_qubits; ++k) {
        const double unit = std::ldexp(guard * m_scale, k - n_qubits);
        const double x = reduced_ratio_mod(delta_i, unit, 1.0);
        const double c = std::cos(kPi * x);
        p *= c * c;
    }
    return p;
}

double tail_probability(int threshold, int n_qubits, TailRange range) {
    if (threshold < 1 || n_qubits < 1 || n_qubits > 60) {
        throw std::invalid_argument("tail_probability: need threshold >= 1 and 1 <= N <= 60");
    }
    const long long lo = range == TailRange::Symmetric ? -static_cast<long long>(threshold)
                                                       : -(static_cast<long long>(threshold) - 1);
    const long long hi = threshold;
    double within = 0.0;
    for (long long n = lo; n <= hi; ++n) {
        // prod_k cos^2((n + 1/2) pi / 2^k); the lattice offsets are dyadic,
        // so the fraction (2n+1)/2^(k+1) reduces mod 1 exactly in integers.
        double p = 1.0;
        for (int k = 1; k <= n_qubits; ++k) {
            const long long den = 1ll << (k + 1);
            const long long num = ((2 * n + 1) % den + den) % den;
            const double c = std::cos(kPi * std::ldexp(static_cast<double>(num), -(k + 1)));
            p *= c * c;
        }
        within += p;
    }
    return 1.0 - within;
}

} // namespace fieldint
