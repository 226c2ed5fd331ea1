#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fieldint/classical.hpp"
#include "fieldint/quantum.hpp"

namespace fieldint {

enum class Protocol { Classical, MethodI, MethodII, Combined, Counter };

std::string_view protocol_name(Protocol protocol);
Protocol protocol_from_name(std::string_view name);

struct TrialRecord {
    std::int64_t trial_id = 0; // trial index within its I value
    Protocol protocol = Protocol::Classical;
    double i_true = 0.0;
    double i_est = 0.0;
    double abs_error = 0.0;
};

struct ErrorStats {
    std::int64_t trials = 0;
    double mean_error = 0.0; // signed
    double rms_error = 0.0;  // signed, so rms >= |mean|
    double median_abs_error = 0.0;
    double max_abs_error = 0.0;
    double p50 = 0.0, p90 = 0.0, p99 = 0.0; // nearest-rank quantiles of |error|
};

ErrorStats compute_stats(const std::vector<TrialRecord>& records);

using ProtocolConfig = std::variant<ClassicalConfig, QuantumConfig, CounterConfig>;

Protocol protocol_of(const ProtocolConfig& config);

struct ExperimentSpec {
    ProtocolConfig config;
    std::vector<double> i_values;
    int trials_per_value = 1;
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const;
};

struct ValueStats {
    double i_true = 0.0;
    ErrorStats stats;
};

struct ExperimentResult {
    std::vector<TrialRecord> records; // ordered by (value index, trial_id)
    std::vector<ValueStats> per_value;
    ErrorStats overall;
};

// Runs trials_per_value trials at every I value. Deterministic given the
// seed for any thread count: trial t of value v draws from the substream
// chain seed -> protocol id -> v -> t, and records land in preallocated
// slots. A single trial of the same chain is also how one-shot readouts
// (table rows, CLI --trials 1) are produced.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Exact outcome distribution of the pure digit ladder: walks all 2^N
// adaptive transcripts multiplying per-step Bernoulli probabilities (the
// same step probabilities the sampler draws from). Entry m is P(m_hat = m).
// Independent of readout_probability; N <= 12.
std::vector<double> enumerate_distribution(double integral, double alpha, int n_qubits);

struct Table1Row {
    int n = 0;
    double i_true = 0.0;
    double quantum = 0.0;
    double classical = 0.0;
};

// The benchmark grid I_n = (n*pi) mod 10, n = 1..10, with one 30-qubit
// ladder readout and one 30-bit classical estimate per value
// (M = 5, guard = 10, lambda = 1.2/M).
std::vector<Table1Row> table1_experiment(std::uint64_t seed);

struct ScalingPoint {
    int n_carriers = 0;
    double metric = 0.0; // protocol's error metric at this N
};

struct ScalingFit {
    Protocol protocol = Protocol::Classical;
    std::vector<ScalingPoint> points;
    double slope = 0.0;
    double slope_stderr = 0.0;
    std::string x_axis; // "log(N)" or "N"
    std::string y_axis; // metric and its log base
};

// Error metric vs carrier count with a least-squares slope:
//   classical, method-I: rms error,          log(metric) vs log(N)
//   method-II:           median |error|,     log2(metric) vs N  (worst-case offset)
//   counter:             rms relative error, log2(metric) vs N
ScalingFit scaling_study(Protocol protocol, const std::vector<int>& n_values, int trials,
                         std::uint64_t seed);

// One TrialRecord per line after a `# {json config echo}` comment and the
// fixed header `trial_id,protocol,i_true,i_est,abs_error`. Doubles are
// shortest round-trip representations, so equal inputs give equal bytes.
std::string to_csv(const ExperimentSpec& spec, const ExperimentResult& result);

// JSON summary: spec echo (seed included) plus per-value and overall stats.
std::string to_json_summary(const ExperimentSpec& spec, const ExperimentResult& result);

std::string format_double(double value); // shortest round-trip decimal

} // namespace fieldint
