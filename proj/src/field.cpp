#include "fieldint/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fieldint {

FieldSpec FieldSpec::constant(double amplitude, double length) {
    FieldSpec f;
    f.kind = Kind::Constant;
    f.amplitude = amplitude;
    f.length = length;
    f.validate();
    return f;
}

FieldSpec FieldSpec::sampled_grid(std::vector<double> samples, double dx) {
    FieldSpec f;
    f.kind = Kind::SampledGrid;
    f.samples = std::move(samples);
    f.dx = dx;
    f.validate();
    return f;
}

FieldSpec FieldSpec::target_integral(double value) {
    FieldSpec f;
    f.kind = Kind::TargetIntegral;
    f.target = value;
    return f;
}

void FieldSpec::validate() const {
    switch (kind) {
    case Kind::Constant:
        if (!(length > 0.0) || !std::isfinite(length)) {
            throw std::invalid_argument("field: path length must be positive");
        }
        if (!std::isfinite(amplitude)) {
            throw std::invalid_argument("field: amplitude must be finite");
        }
        break;
    case Kind::SampledGrid:
        if (samples.size() < 2) {
            throw std::invalid_argument("field: sampled grid needs at least 2 samples");
        }
        if (!(dx > 0.0) || !std::isfinite(dx)) {
            throw std::invalid_argument("field: grid spacing must be positive");
        }
        for (double v : samples) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("field: grid sample must be finite");
            }
        }
        break;
    case Kind::TargetIntegral:
        if (!std::isfinite(target)) {
            throw std::invalid_argument("field: target integral must be finite");
        }
        break;
    }
}

MagnitudeScale::MagnitudeScale(double m) : value(m) {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw std::invalid_argument("magnitude scale must be positive");
    }
}

double integrate(const FieldSpec& field) {
    field.validate();
    switch (field.kind) {
    case FieldSpec::Kind::Constant:
        return field.amplitude * field.length;
    case FieldSpec::Kind::SampledGrid: {
        double acc = 0.5 * (field.samples.front() + field.samples.back());
        for (std::size_t i = 1; i + 1 < field.samples.size(); ++i) {
            acc += field.samples[i];
        }
        return acc * field.dx;
    }
    case FieldSpec::Kind::TargetIntegral:
        return field.target;
    }
    throw std::logic_error("field: unknown kind");
}

void require_non_negative(const FieldSpec& field) {
    field.validate();
    switch (field.kind) {
    case FieldSpec::Kind::Constant:
        if (field.amplitude < 0.0) {
            throw std::domain_error("classical mode requires a non-negative field");
        }
        break;
    case FieldSpec::Kind::SampledGrid:
        if (std::any_of(field.samples.begin(), field.samples.end(),
                        [](double v) { return v < 0.0; })) {
            throw std::domain_error("classical mode requires a non-negative field");
        }
        break;
    case FieldSpec::Kind::TargetIntegral:
        if (field.target < 0.0) {
            throw std::domain_error("classical mode requires a non-negative integral");
        }
        break;
    }
}

namespace {

double parse_real(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("field document: bad number for '" + key + "'");
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
    }
    if (pos != text.size()) {
        throw std::invalid_argument("field document: trailing junk after '" + key + "'");
    }
    return v;
}

} // namespace

FieldSpec parse_field_spec(std::istream& in) {
    FieldSpec f;
    bool kind_seen = false;
    bool amplitude_seen = false, length_seen = false;
    bool dx_seen = false, samples_seen = false, target_seen = false;

    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::size_t eq = line.find('=');
        std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
        std::string value = eq == std::string::npos ? "" : line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        if (key.empty() && value.empty()) {
            continue;
        }
        if (key.empty() || eq == std::string::npos) {
            throw std::invalid_argument("field document: expected 'key = value', got '" + line + "'");
        }

        if (key == "kind") {
            kind_seen = true;
            if (value == "constant") {
                f.kind = FieldSpec::Kind::Constant;
            } else if (value == "sampled-grid") {
                f.kind = FieldSpec::Kind::SampledGrid;
            } else if (value == "target-integral") {
                f.kind = FieldSpec::Kind::TargetIntegral;
            } else {
                throw std::invalid_argument("field document: unknown kind '" + value + "'");
            }
        } else if (key == "amplitude") {
            amplitude_seen = true;
            f.amplitude = parse_real(key, value);
        } else if (key == "length") {
            length_seen = true;
            f.length = parse_real(key, value);
        } else if (key == "dx") {
            dx_seen = true;
            f.dx = parse_real(key, value);
        } else if (key == "target") {
            target_seen = true;
            f.target = parse_real(key, value);
        } else if (key == "samples") {
            samples_seen = true;
            std::replace(value.begin(), value.end(), ',', ' ');
            std::istringstream ss(value);
            f.samples.clear();
            double v = 0.0;
            while (ss >> v) {
                f.samples.push_back(v);
            }
            if (!ss.eof()) {
                throw std::invalid_argument("field document: bad number in samples");
            }
        } else {
            throw std::invalid_argument("field document: unknown key '" + key + "'");
        }
    }

    if (!kind_seen) {
        throw std::invalid_argument("field document: missing 'kind'");
    }
    auto require = [](bool seen, const char* what) {
        if (!seen) {
            throw std::invalid_argument(std::string("field document: missing '") + what + "'");
        }
    };
    auto forbid = [](bool seen, const char* what) {
        if (seen) {
            throw std::invalid_argument(std::string("field document: '") + what +
                                        "' does not apply to this kind");
        }
    };
    switch (f.kind) {
    case FieldSpec::Kind::Constant:
        require(amplitude_seen, "amplitude");
        require(length_seen, "length");
        forbid(dx_seen, "dx");
        forbid(samples_seen, "samples");
        forbid(target_seen, "target");
        break;
    case FieldSpec::Kind::SampledGrid:
        require(dx_seen, "dx");
        require(samples_seen, "samples");
        forbid(amplitude_seen, "amplitude");
        forbid(length_seen, "length");
        forbid(target_seen, "target");
        break;
    case FieldSpec::Kind::TargetIntegral:
        require(target_seen, "target");
        forbid(amplitude_seen, "amplitude");
        forbid(length_seen, "length");
        forbid(dx_seen, "dx");
        forbid(samples_seen, "samples");
        break;
    }
    f.validate();
    return f;
}

FieldSpec load_field_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open field document: " + path);
    }
    return parse_field_spec(in);
}

} // namespace fieldint
