#pragma once

#include <cstdint>
#include <vector>

#include "fieldint/field.hpp"
#include "fieldint/rng.hpp"

namespace fieldint {

// Spin confined to the x-y plane. Field coupling is a z-axis rotation and
// every measurement is along x (or y via a quarter turn), so one azimuthal
// angle is the entire state; no amplitudes or entanglement ever arise.
struct PlanarSpin {
    double theta = 0.0; // radians in [0, 2*pi); fresh carriers start at +x
};

enum class SpinOutcome { Plus, Minus };
enum class Parity { Even, Odd };

enum class QuantumMode { MethodI, MethodII, Combined, GhParity };

const char* quantum_mode_name(QuantumMode mode);

struct QuantumConfig {
    double alpha;        // ladder quantum (integral units)
    int n_qubits;        // N
    int n0 = 0;          // qubits reserved for the remainder measurement
    double guard = 10.0; // range headroom factor in alpha = guard*M / 2^(N-N0)
    MagnitudeScale scale{5.0};
    QuantumMode mode = QuantumMode::MethodII;

    // alpha derived from (scale, guard) via choose_alpha.
    static QuantumConfig with_derived_alpha(MagnitudeScale scale, int n_qubits, int n0,
                                            double guard, QuantumMode mode);

    int ladder_steps() const { return n_qubits - n0; }
    void validate() const;
};

PlanarSpin precess(PlanarSpin spin, double angle);

// Projective measurement along x: Plus with probability cos^2(theta/2).
// Consumes the carrier.
SpinOutcome measure_x(const PlanarSpin& spin, RngStream& rng);

// Single-qubit parity test: couple so that I = alpha rotates the spin by pi,
// then measure. Deterministic (Even/Odd of m) whenever I = m*alpha exactly.
Parity gh_parity(double integral, double alpha, RngStream& rng);

// Correction angle theta_k cancelling the digits already read and the
// measured remainder:
//   theta_k = -sum_{i<k} pi*d(i)/2^(k-i) - pi*beta_hat/(2^(k-1)*alpha).
// digits holds d(1)..d(k-1), least significant first.
double correction_angle(const std::vector<std::uint8_t>& digits, int k, double beta_hat,
                        double alpha);

// alpha = guard * M / 2^(N - N0). Throws when the quantum drops below
// 2^-46 * M, where double-precision phase reduction is no longer trustworthy.
double choose_alpha(double m_scale, int n_qubits, int n0, double guard);

struct LadderStep {
    int k = 0;                 // 1-based step index
    int coupling_exponent = 0; // step couples at pi / (2^exponent * alpha) per unit integral
    double theta_corr = 0.0;   // correction_angle for this step
    double theta_total = 0.0;  // actual spin angle before measurement, reduced to [0, 2*pi)
};

struct DigitReadout {
    std::vector<std::uint8_t> digits; // d(1)..d(N'), least significant first
    std::uint64_t m_hat = 0;
    double beta_hat = 0.0;
    double alpha = 0.0;
    double i_tilde = 0.0;          // m_hat * alpha + beta_hat
    std::vector<LadderStep> steps; // transcript, filled when record_steps
};

// The digit ladder: step k couples at half the previous strength, the
// correction angle cancels known digits, and the measurement yields d(k)
// (Minus <=> 1). Emits exactly n_qubits - n0 digits; when
// I = m*alpha + beta_hat exactly with m < 2^(N-N0) the transcript is
// deterministic and i_tilde == I. Out-of-range or negative I reads out
// m modulo 2^(N-N0).
DigitReadout run_method_II(double integral, const QuantumConfig& cfg, double beta_hat,
                           RngStream& rng, bool record_steps = false);

// Uniform coupling: every carrier precesses by 2*pi*I/range_max; half the
// carriers give <cos>, half <sin>, and atan2 recovers the angle. Returns an
// estimate in [0, range_max), i.e. I modulo range_max; standard error scales
// as range_max / sqrt(n_qubits).
double method_I_estimate(double integral, double range_max, int n_qubits, RngStream& rng);

// Remainder first (method I on n0 carriers, coupling a full turn per alpha
// of integral), then the digit ladder on the rest with the beta_hat
// correction. i_tilde = m_hat * alpha + beta_hat.
DigitReadout run_combined(double integral, const QuantumConfig& cfg, RngStream& rng);

// Probability of reading i_tilde when the integral is I:
//   prod_{k=1..N} cos^2((I - i_tilde) * pi / (2^k * alpha)).
// Evaluated factor-by-factor with range reduction; symmetric in the sign of
// the error and exactly 1 at i_tilde == I.
double readout_probability(double i_tilde, double integral, double alpha, int n_qubits);

// Same product expressed against the scale: alpha = guard*M/2^N substituted,
//   prod_{k=1..N} cos^2(delta_i * pi / (2^(k-N) * guard * M)).
double error_probability(double delta_i, double m_scale, int n_qubits, double guard);

// Probability that the readout error exceeds threshold*alpha at the
// worst-case offset I mod alpha = alpha/2. The lattice errors are
// (n + 1/2)*alpha; Symmetric sums n = -T..T, Asymmetric sums n = -(T-1)..T.
// At T = 10, N = 30 they evaluate to 0.0193 and 0.0205. Asymmetric with
// T = 2^(N-1) covers exactly one lattice period, so its tail is then 0.
enum class TailRange { Symmetric, Asymmetric };
double tail_probability(int threshold, int n_qubits, TailRange range = TailRange::Symmetric);

// --- phase reduction -------------------------------------------------------
//
// Naive ladder angles reach I*pi/alpha ~ 1e8 rad at N = 30; feeding that to
// cos() after rounding I/alpha wipes out the digits the protocol is trying
// to read. All angles are therefore built from reduced ratios:

// (value/unit) mod period for period 1 or 2, computed as one division, an
// integer-multiple subtraction fused by fma, and a renormalizing division.
// Accurate to ~1 ulp of period for |value/unit| up to 2^52.
double reduced_ratio_mod(double value, double unit, double period);

// Total precession of ladder step k in half-turns, reduced to [0, 2):
// ((I_eff/(2^(k-1)*alpha)) mod 2) minus the exact dyadic digit correction
// m_prefix/2^(k-1). m_prefix holds the digits read so far (bit i-1 = d(i)).
double ladder_step_turns(double effective_integral, double alpha, int k,
                         std::uint64_t m_prefix);

// Probability that step k measures Plus (digit 0). Shared verbatim by the
// sampler and the exhaustive transcript enumeration.
double ladder_step_plus_probability(double effective_integral, double alpha, int k,
                                    std::uint64_t m_prefix);

} // namespace fieldint
