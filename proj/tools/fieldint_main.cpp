#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fieldint/analysis.hpp"
#include "fieldint/classical.hpp"
#include "fieldint/field.hpp"
#include "fieldint/quantum.hpp"

namespace {

using namespace fieldint;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct SimulateOptions {
    std::string protocol = "method-ii";
    std::optional<double> target_i;
    std::string field_path;
    int trials = 1;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_path;
    std::string format = "csv";
    int n_bits = 30;
    int n_qubits = 30;
    int n0 = 0;
    double m_scale = 5.0;
    std::optional<double> lambda;
    double guard = 10.0;
    std::optional<double> alpha;
};

ProtocolConfig build_config(const SimulateOptions& opt) {
    const Protocol protocol = protocol_from_name(opt.protocol);
    const MagnitudeScale scale{opt.m_scale};
    switch (protocol) {
    case Protocol::Classical: {
        ClassicalConfig cfg = ClassicalConfig::for_scale(scale, opt.n_bits);
        if (opt.lambda) {
            cfg.lambda = *opt.lambda;
        }
        cfg.validate();
        return cfg;
    }
    case Protocol::Counter:
        return CounterConfig{opt.n_bits, opt.guard, scale};
    case Protocol::MethodI:
    case Protocol::MethodII:
    case Protocol::Combined: {
        const QuantumMode mode = protocol == Protocol::MethodI    ? QuantumMode::MethodI
                                 : protocol == Protocol::MethodII ? QuantumMode::MethodII
                                                                  : QuantumMode::Combined;
        if (opt.alpha) {
            return QuantumConfig{*opt.alpha, opt.n_qubits, opt.n0, opt.guard, scale, mode};
        }
        return QuantumConfig::with_derived_alpha(scale, opt.n_qubits, opt.n0, opt.guard, mode);
    }
    }
    throw std::invalid_argument("unsupported protocol");
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

int cmd_simulate(const SimulateOptions& opt) {
    double i_true = 0.0;
    if (opt.target_i) {
        i_true = *opt.target_i;
    } else {
        const FieldSpec field = load_field_spec(opt.field_path);
        i_true = integrate(field);
        const Protocol p = protocol_from_name(opt.protocol);
        if (p == Protocol::Classical || p == Protocol::Counter) {
            require_non_negative(field);
        }
    }

    ExperimentSpec spec{build_config(opt), {i_true}, opt.trials, opt.seed, opt.threads};
    const ExperimentResult result = run_experiment(spec);
    write_output(opt.out_path,
                 opt.format == "json" ? to_json_summary(spec, result) : to_csv(spec, result));
    return kExitOk;
}

int cmd_table1(std::uint64_t seed) {
    const std::vector<Table1Row> rows = table1_experiment(seed);
    std::printf("%3s  %14s  %14s  %14s\n", "n", "I=n*pi mod 10", "quantum", "classical");
    for (const Table1Row& row : rows) {
        std::printf("%3d  %14.9f  %14.9f  %14.9f\n", row.n, row.i_true, row.quantum,
                    row.classical);
    }
    std::printf("\n30 qubits vs 30 bits per value, M = 5, guard = 10, lambda = 1.2/M, seed = %llu\n",
                static_cast<unsigned long long>(seed));
    return kExitOk;
}

int cmd_error_profile(int n_qubits, double m_scale, double guard, int max_n_alpha) {
    const double alpha = choose_alpha(m_scale, n_qubits, 0, guard);
    std::printf("alpha = %.12g  (N = %d, M = %g, guard = %g)\n\n", alpha, n_qubits, m_scale,
                guard);
    std::printf("%12s  %22s\n", "delta_I/alpha", "error probability");
    for (int half = 0; half <= 2 * max_n_alpha; ++half) {
        const double delta = 0.5 * half * alpha;
        std::printf("%12.1f  %22.15g\n", 0.5 * half, error_probability(delta, m_scale, n_qubits, guard));
    }
    std::printf("\nP(|error| > %d*alpha) at worst-case offset I mod alpha = alpha/2:\n", max_n_alpha);
    std::printf("  symmetric lattice sum (n = -T..T):    %.6f\n",
                tail_probability(max_n_alpha, n_qubits, TailRange::Symmetric));
    std::printf("  asymmetric variant (n = -(T-1)..T):   %.6f\n",
                tail_probability(max_n_alpha, n_qubits, TailRange::Asymmetric));
    return kExitOk;
}

int cmd_optimize_lambda(double m_scale, int n_bits) {
    const double best = optimize_lambda(m_scale, n_bits);
    const double at_best = uncertainty(m_scale, best, n_bits);
    const double conventional = 1.2 / m_scale;
    const double at_conventional = uncertainty(m_scale, conventional, n_bits);
    std::printf("minimizer of the uncertainty at I = M = %g, N = %d:\n", m_scale, n_bits);
    std::printf("  lambda*          = %.9g   (lambda* x M = %.6f)\n", best, best * m_scale);
    std::printf("  uncertainty      = %.9g\n", at_best);
    std::printf("  lambda = 1.2/M   = %.9g   uncertainty = %.9g  (+%.2f%% above minimum)\n",
                conventional, at_conventional, 100.0 * (at_conventional / at_best - 1.0));
    std::printf("note: the conventional default 1.2/M is not the minimizer; the exact stationary\n"
                "point is lambda x M = %.4f. The default stays within a few percent of optimal\n"
                "and is kept for comparability.\n\n",
                best * m_scale);
    std::printf("%14s  %14s\n", "lambda", "uncertainty");
    for (int i = -6; i <= 6; ++i) {
        const double l = best * std::pow(2.0, 0.5 * i);
        std::printf("%14.9g  %14.9g\n", l, uncertainty(m_scale, l, n_bits));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential-carrier field integral measurement simulator"};
    app.require_subcommand(1);

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run Monte Carlo trials of one protocol and emit CSV or a JSON summary");
    simulate->add_option("--protocol", sim.protocol, "classical|method-i|method-ii|combined|counter")
        ->default_val(sim.protocol);
    CLI::Option* target = simulate->add_option("--target-i", sim.target_i, "Integral value to measure");
    CLI::Option* field_file =
        simulate->add_option("--field", sim.field_path, "Field document (see README for the schema)");
    target->excludes(field_file);
    simulate->add_option("--trials", sim.trials, "Trials per value")->default_val(sim.trials);
    simulate->add_option("--seed", sim.seed, "Master seed")->default_val(sim.seed);
    simulate->add_option("--threads", sim.threads, "Worker threads (output independent of this)")
        ->default_val(sim.threads);
    simulate->add_option("--out", sim.out_path, "Output path (default stdout)");
    simulate->add_option("--format", sim.format, "csv|json")
        ->default_val(sim.format)
        ->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--n-bits", sim.n_bits, "Classical/counter carrier count")
        ->default_val(sim.n_bits);
    simulate->add_option("--n-qubits", sim.n_qubits, "Quantum carrier count")->default_val(sim.n_qubits);
    simulate->add_option("--n0", sim.n0, "Qubits reserved for the remainder (combined mode)")
        ->default_val(sim.n0);
    CLI::Option* m_opt =
        simulate->add_option("--m-scale", sim.m_scale, "Known order of magnitude of I")
            ->default_val(sim.m_scale);
    simulate->add_option("--lambda", sim.lambda, "Classical coupling (default 1.2/M)");
    CLI::Option* guard_opt =
        simulate->add_option("--guard", sim.guard, "Range headroom factor")->default_val(sim.guard);
    CLI::Option* alpha_opt =
        simulate->add_option("--alpha", sim.alpha, "Ladder quantum override (excludes --m-scale/--guard)");
    alpha_opt->excludes(m_opt);
    alpha_opt->excludes(guard_opt);

    std::uint64_t table_seed = 0;
    CLI::App* table1 = app.add_subcommand(
        "table1", "Benchmark grid I_n = (n*pi) mod 10: one quantum and one classical readout per value");
    table1->add_option("--seed", table_seed, "Master seed")->default_val(table_seed);

    int ep_qubits = 30;
    double ep_m = 5.0, ep_guard = 10.0;
    int ep_max = 10;
    CLI::App* error_profile =
        app.add_subcommand("error-profile", "Analytic readout error profile of the digit ladder");
    error_profile->add_option("--n-qubits", ep_qubits)->default_val(ep_qubits);
    error_profile->add_option("--m-scale", ep_m)->default_val(ep_m);
    error_profile->add_option("--guard", ep_guard)->default_val(ep_guard);
    error_profile->add_option("--max-n-alpha", ep_max, "Tail threshold in units of alpha")
        ->default_val(ep_max);

    double ol_m = 5.0;
    int ol_bits = 30;
    CLI::App* optimize =
        app.add_subcommand("optimize-lambda", "Minimize the classical uncertainty over lambda");
    optimize->add_option("--m-scale", ol_m)->default_val(ol_m);
    optimize->add_option("--n-bits", ol_bits)->default_val(ol_bits);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            if (!sim.target_i && sim.field_path.empty()) {
                std::cerr << "simulate: one of --target-i or --field is required\n";
                return kExitUsage;
            }
            return cmd_simulate(sim);
        }
        if (table1->parsed()) {
            return cmd_table1(table_seed);
        }
        if (error_profile->parsed()) {
            return cmd_error_profile(ep_qubits, ep_m, ep_guard, ep_max);
        }
        if (optimize->parsed()) {
            return cmd_optimize_lambda(ol_m, ol_bits);
        }
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
