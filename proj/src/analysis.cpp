#include "fieldint/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace fieldint {

namespace {

using nlohmann::json;

constexpr std::uint64_t protocol_stream_id(Protocol p) {
    return static_cast<std::uint64_t>(p);
}

} // namespace

std::string_view protocol_name(Protocol protocol) {
    switch (protocol) {
    case Protocol::Classical:
        return "classical";
    case Protocol::MethodI:
        return "method-i";
    case Protocol::MethodII:
        return "method-ii";
    case Protocol::Combined:
        return "combined";
    case Protocol::Counter:
        return "counter";
    }
    return "?";
}

Protocol protocol_from_name(std::string_view name) {
    if (name == "classical") return Protocol::Classical;
    if (name == "method-i") return Protocol::MethodI;
    if (name == "method-ii") return Protocol::MethodII;
    if (name == "combined") return Protocol::Combined;
    if (name == "counter") return Protocol::Counter;
    throw std::invalid_argument("unknown protocol: " + std::string(name));
}

Protocol protocol_of(const ProtocolConfig& config) {
    if (std::holds_alternative<ClassicalConfig>(config)) {
        return Protocol::Classical;
    }
    if (std::holds_alternative<CounterConfig>(config)) {
        return Protocol::Counter;
    }
    switch (std::get<QuantumConfig>(config).mode) {
    case QuantumMode::MethodI:
        return Protocol::MethodI;
    case QuantumMode::MethodII:
        return Protocol::MethodII;
    case QuantumMode::Combined:
        return Protocol::Combined;
    case QuantumMode::GhParity:
        break;
    }
    throw std::invalid_argument("gh-parity is a single-shot test, not an experiment protocol");
}

ErrorStats compute_stats(const std::vector<TrialRecord>& records) {
    ErrorStats s;
    s.trials = static_cast<std::int64_t>(records.size());
    if (records.empty()) {
        return s;
    }
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> abs_errors;
    abs_errors.reserve(records.size());
    for (const TrialRecord& r : records) {
        const double e = r.i_est - r.i_true;
        sum += e;
        sum_sq += e * e;
        abs_errors.push_back(std::abs(e));
    }
    const double n = static_cast<double>(records.size());
    s.mean_error = sum / n;
    s.rms_error = std::sqrt(sum_sq / n);
    std::sort(abs_errors.begin(), abs_errors.end());
    s.max_abs_error = abs_errors.back();
    auto nearest_rank = [&](double q) {
        const auto rank = static_cast<std::size_t>(std::ceil(q * n));
        return abs_errors[std::min(abs_errors.size() - 1, rank == 0 ? 0 : rank - 1)];
    };
    s.p50 = nearest_rank(0.50);
    s.p90 = nearest_rank(0.90);
    s.p99 = nearest_rank(0.99);
    s.median_abs_error = s.p50;
    return s;
}

void ExperimentSpec::validate() const {
    if (trials_per_value < 1) {
        throw std::invalid_argument("experiment: trials_per_value must be >= 1");
    }
    if (i_values.empty()) {
        throw std::invalid_argument("experiment: need at least one I value");
    }
    if (threads < 1) {
        throw std::invalid_argument("experiment: threads must be >= 1");
    }
    std::visit([](const auto& cfg) { cfg.validate(); }, config);
    protocol_of(config); // rejects modes that are not experiment protocols
}

namespace {

double run_one_trial(const ProtocolConfig& config, double i_true, RngStream trial_rng) {
    if (const auto* classical = std::get_if<ClassicalConfig>(&config)) {
        const int flips = simulate_bits(i_true, *classical, trial_rng);
        return estimate_integral(flips, *classical).i_hat;
    }
    if (const auto* counter = std::get_if<CounterConfig>(&config)) {
        return counter_baseline(i_true, *counter, trial_rng);
    }
    const QuantumConfig& q = std::get<QuantumConfig>(config);
    switch (q.mode) {
    case QuantumMode::MethodI:
        return method_I_estimate(i_true, q.guard * q.scale.value, q.n_qubits, trial_rng);
    case QuantumMode::MethodII:
        return run_method_II(i_true, q, 0.0, trial_rng).i_tilde;
    case QuantumMode::Combined:
        return run_combined(i_true, q, trial_rng).i_tilde;
    case QuantumMode::GhParity:
        break;
    }
    throw std::logic_error("unreachable protocol dispatch");
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const Protocol protocol = protocol_of(spec.config);
    const RngStream protocol_stream = RngStream(spec.seed).substream(protocol_stream_id(protocol));

    const std::int64_t trials = spec.trials_per_value;
    const std::int64_t total = static_cast<std::int64_t>(spec.i_values.size()) * trials;

    ExperimentResult result;
    result.records.resize(static_cast<std::size_t>(total));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](std::int64_t begin, std::int64_t end) {
        try {
            for (std::int64_t g = begin; g < end; ++g) {
                const std::int64_t value_index = g / trials;
                const std::int64_t trial_id = g % trials;
                const double i_true = spec.i_values[static_cast<std::size_t>(value_index)];
                RngStream trial_rng = protocol_stream
                                          .substream(static_cast<std::uint64_t>(value_index))
                                          .substream(static_cast<std::uint64_t>(trial_id));
                const double i_est = run_one_trial(spec.config, i_true, trial_rng);
                result.records[static_cast<std::size_t>(g)] =
                    TrialRecord{trial_id, protocol, i_true, i_est, std::abs(i_est - i_true)};
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };

    if (spec.threads == 1 || total < 2) {
        worker(0, total);
    } else {
        const int n_threads = std::min<std::int64_t>(spec.threads, total);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        const std::int64_t chunk = (total + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const std::int64_t begin = t * chunk;
            const std::int64_t end = std::min(total, begin + chunk);
            if (begin < end) {
                pool.emplace_back(worker, begin, end);
            }
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    result.per_value.reserve(spec.i_values.size());
    std::vector<TrialRecord> slice;
    for (std::size_t v = 0; v < spec.i_values.size(); ++v) {
        slice.assign(result.records.begin() + static_cast<std::ptrdiff_t>(v * trials),
                     result.records.begin() + static_cast<std::ptrdiff_t>((v + 1) * trials));
        result.per_value.push_back(ValueStats{spec.i_values[v], compute_stats(slice)});
    }
    result.overall = compute_stats(result.records);
    return result;
}

std::vector<double> enumerate_distribution(double integral, double alpha, int n_qubits) {
    if (n_qubits < 1 || n_qubits > 12) {
        throw std::invalid_argument("enumerate_distribution: N must be in 1..12");
    }
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("enumerate_distribution: alpha must be positive");
    }
    std::vector<double> dist(std::size_t{1} << n_qubits, 0.0);
    // Depth-first over digit prefixes; probability multiplies down the tree.
    struct Node {
        int k;
        std::uint64_t m;
        double prob;
    };
    std::vector<Node> stack{{1, 0, 1.0}};
    while (!stack.empty()) {
        const Node node = stack.back();
        stack.pop_back();
        if (node.k > n_qubits) {
            dist[node.m] = node.prob;
            continue;
        }
        const double p_plus = ladder_step_plus_probability(integral, alpha, node.k, node.m);
        stack.push_back(Node{node.k + 1, node.m, node.prob * p_plus});
        stack.push_back(
            Node{node.k + 1, node.m | (std::uint64_t{1} << (node.k - 1)), node.prob * (1.0 - p_plus)});
    }
    return dist;
}

std::vector<Table1Row> table1_experiment(std::uint64_t seed) {
    const MagnitudeScale scale{5.0};
    ExperimentSpec quantum{
        QuantumConfig::with_derived_alpha(scale, 30, 0, 10.0, QuantumMode::MethodII), {}, 1, seed, 1};
    ExperimentSpec classical{ClassicalConfig::for_scale(scale, 30), {}, 1, seed, 1};
    for (int n = 1; n <= 10; ++n) {
        quantum.i_values.push_back(std::fmod(n * std::numbers::pi, 10.0));
    }
    classical.i_values = quantum.i_values;

    const ExperimentResult q = run_experiment(quantum);
    const ExperimentResult c = run_experiment(classical);
    std::vector<Table1Row> rows;
    rows.reserve(10);
    for (int n = 1; n <= 10; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - 1);
        rows.push_back(Table1Row{n, quantum.i_values[i], q.records[i].i_est, c.records[i].i_est});
    }
    return rows;
}

namespace {

struct FitInput {
    std::vector<double> x, y;
};

void least_squares(const FitInput& in, double& slope, double& stderr_out) {
    const std::size_t n = in.x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += in.x[i];
        my += in.y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (in.x[i] - mx) * (in.x[i] - mx);
        sxy += (in.x[i] - mx) * (in.y[i] - my);
    }
    slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = in.y[i] - (intercept + slope * in.x[i]);
        ss_res += r * r;
    }
    stderr_out = n > 2 ? std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
}

} // namespace

ScalingFit scaling_study(Protocol protocol, const std::vector<int>& n_values, int trials,
                         std::uint64_t seed) {
    if (n_values.size() < 3) {
        throw std::invalid_argument("scaling_study: need at least 3 carrier counts");
    }
    const MagnitudeScale scale{5.0};
    const double guard = 10.0;

    ScalingFit fit;
    fit.protocol = protocol;
    FitInput in;
    for (const int n : n_values) {
        ExperimentSpec spec{ClassicalConfig::for_scale(scale, 1), {}, trials, seed, 1};
        double i_true = scale.value;
        double metric = 0.0;
        switch (protocol) {
        case Protocol::Classical:
            spec.config = ClassicalConfig::for_scale(scale, n);
            break;
        case Protocol::MethodI:
            spec.config = QuantumConfig{guard * scale.value, n, 0, guard, scale, QuantumMode::MethodI};
            break;
        case Protocol::MethodII: {
            const double alpha = choose_alpha(scale.value, n, 0, guard);
            // Worst-case offset: land exactly between two lattice readouts
            // near M.
            i_true = (std::floor(scale.value / alpha) + 0.5) * alpha;
            spec.config = QuantumConfig{alpha, n, 0, guard, scale, QuantumMode::MethodII};
            break;
        }
        case Protocol::Combined:
            spec.config =
                QuantumConfig{choose_alpha(scale.value, n, n / 3, guard), n, n / 3, guard, scale,
                              QuantumMode::Combined};
            break;
        case Protocol::Counter:
            spec.config = CounterConfig{n, guard, scale};
            break;
        }
        spec.i_values = {i_true};
        const ExperimentResult res = run_experiment(spec);
        switch (protocol) {
        case Protocol::Classical:
        case Protocol::MethodI:
            metric = res.overall.rms_error;
            in.x.push_back(std::log(static_cast<double>(n)));
            in.y.push_back(std::log(metric));
            break;
        case Protocol::MethodII:
        case Protocol::Combined:
            metric = res.overall.median_abs_error;
            in.x.push_back(static_cast<double>(n));
            in.y.push_back(std::log2(metric));
            break;
        case Protocol::Counter:
            metric = res.overall.rms_error / i_true;
            in.x.push_back(static_cast<double>(n));
            in.y.push_back(std::log2(metric));
            break;
        }
        fit.points.push_back(ScalingPoint{n, metric});
    }
    least_squares(in, fit.slope, fit.slope_stderr);
    const bool loglog = protocol == Protocol::Classical || protocol == Protocol::MethodI;
    fit.x_axis = loglog ? "log(N)" : "N";
    fit.y_axis = loglog ? "log(rms error)"
                        : (protocol == Protocol::Counter ? "log2(rms relative error)"
                                                         : "log2(median abs error)");
    return fit;
}

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

json config_to_json(const ProtocolConfig& config) {
    json j;
    j["protocol"] = std::string(protocol_name(protocol_of(config)));
    if (const auto* c = std::get_if<ClassicalConfig>(&config)) {
        j["lambda"] = c->lambda;
        j["n_bits"] = c->n_bits;
        j["m_scale"] = c->scale.value;
    } else if (const auto* p = std::get_if<CounterConfig>(&config)) {
        j["n_bits"] = p->n_bits;
        j["guard"] = p->guard;
        j["m_scale"] = p->scale.value;
    } else {
        const QuantumConfig& q = std::get<QuantumConfig>(config);
        j["alpha"] = q.alpha;
        j["n_qubits"] = q.n_qubits;
        j["n0"] = q.n0;
        j["guard"] = q.guard;
        j["m_scale"] = q.scale.value;
        j["mode"] = quantum_mode_name(q.mode);
    }
    return j;
}

// threads is an execution knob, not part of the experiment identity: results
// are thread-count independent, so the echo must be too.
json spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["config"] = config_to_json(spec.config);
    j["i_values"] = spec.i_values;
    j["trials_per_value"] = spec.trials_per_value;
    j["seed"] = spec.seed;
    return j;
}

json stats_to_json(const ErrorStats& s) {
    json j;
    j["trials"] = s.trials;
    j["mean_error"] = s.mean_error;
    j["rms_error"] = s.rms_error;
    j["median_abs_error"] = s.median_abs_error;
    j["max_abs_error"] = s.max_abs_error;
    j["quantiles"] = {{"p50", s.p50}, {"p90", s.p90}, {"p99", s.p99}};
    return j;
}

} // namespace

std::string to_csv(const ExperimentSpec& spec, const ExperimentResult& result) {
    std::string out = "# " + spec_to_json(spec).dump() + "\n";
    out += "trial_id,protocol,i_true,i_est,abs_error\n";
    for (const TrialRecord& r : result.records) {
        out += std::to_string(r.trial_id);
        out += ',';
        out += protocol_name(r.protocol);
        out += ',';
        out += format_double(r.i_true);
        out += ',';
        out += format_double(r.i_est);
        out += ',';
        out += format_double(r.abs_error);
        out += '\n';
    }
    return out;
}

std::string to_json_summary(const ExperimentSpec& spec, const ExperimentResult& result) {
    json j;
    j["spec"] = spec_to_json(spec);
    j["overall"] = stats_to_json(result.overall);
    json values = json::array();
    for (const ValueStats& v : result.per_value) {
        json entry;
        entry["i_true"] = v.i_true;
        entry["stats"] = stats_to_json(v.stats);
        values.push_back(entry);
    }
    j["per_value"] = values;
    return j.dump(2) + "\n";
}

} // namespace fieldint
