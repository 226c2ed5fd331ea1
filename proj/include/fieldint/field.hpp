#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fieldint {

// One-dimensional classical field along the measurement path. Every protocol
// couples to the integral only, so the target-integral kind carries it
// directly; constant and sampled-grid kinds exist for realistic inputs.
struct FieldSpec {
    enum class Kind { Constant, SampledGrid, TargetIntegral };

    Kind kind = Kind::TargetIntegral;
    double amplitude = 0.0;      // Constant: field value
    double length = 0.0;         // Constant: path length
    std::vector<double> samples; // SampledGrid: ordered values, uniform spacing
    double dx = 0.0;             // SampledGrid: sample spacing
    double target = 0.0;         // TargetIntegral: the integral itself

    static FieldSpec constant(double amplitude, double length);
    static FieldSpec sampled_grid(std::vector<double> samples, double dx);
    static FieldSpec target_integral(double value);

    // Throws std::invalid_argument when the kind's invariants fail
    // (positive length/dx, at least two grid samples).
    void validate() const;
};

// Known order of magnitude of the integral.
struct MagnitudeScale {
    double value;

    explicit MagnitudeScale(double m);
};

// Exact ground truth: constant fields analytically, sampled grids by the
// trapezoid rule, target-integral fields verbatim.
double integrate(const FieldSpec& field);

// Gate for the classical protocol, which assumes a non-negative field.
// Throws std::domain_error if any field value (not just the integral) is
// negative.
void require_non_negative(const FieldSpec& field);

// Reads the key-value field document format (see README): lines of
// `key = value`, keys kind/amplitude/length/samples/dx/target, `#` comments.
FieldSpec parse_field_spec(std::istream& in);
FieldSpec load_field_spec(const std::string& path);

} // namespace fieldint
