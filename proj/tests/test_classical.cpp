#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fieldint/classical.hpp"
#include "fieldint/rng.hpp"

using namespace fieldint;

namespace {

const MagnitudeScale kScale{5.0};

ClassicalConfig table_config(int n_bits) { return ClassicalConfig::for_scale(kScale, n_bits); }

} // namespace

TEST_CASE("flip probability") {
    CHECK(flip_probability(0.0, 0.24) == 0.0);
    CHECK(flip_probability(0.0, 7.0) == 0.0);
    // lambda * I = ln 2 gives exactly one half
    CHECK(flip_probability(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(flip_probability(5.0, std::log(2.0) / 5.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(flip_probability(5.0, 0.24) == doctest::Approx(1.0 - std::exp(-1.2)).epsilon(1e-15));
    CHECK(flip_probability(5.0, 0.24) == doctest::Approx(0.698806).epsilon(1e-6));
    CHECK_THROWS_AS(flip_probability(-1.0, 0.24), std::domain_error);
}

TEST_CASE("flip probability is strictly increasing in I") {
    double prev = -1.0;
    for (double i = 0.0; i <= 20.0; i += 0.25) {
        const double p = flip_probability(i, 0.24);
        CHECK(p > prev);
        CHECK(p < 1.0);
        prev = p;
    }
}

TEST_CASE("simulate_bits edge probabilities") {
    const ClassicalConfig cfg = table_config(30);
    RngStream rng(11);
    for (int t = 0; t < 200; ++t) {
        CHECK(simulate_bits(0.0, cfg, rng) == 0);
    }
    // lambda * I = 1000: p rounds to exactly 1 in double, every bit flips
    for (int t = 0; t < 200; ++t) {
        CHECK(simulate_bits(1000.0 / 0.24, cfg, rng) == 30);
    }
}

TEST_CASE("simulate_bits matches the binomial rate") {
    // p = 1/2 via lambda*I = ln 2
    ClassicalConfig cfg{std::log(2.0), 100000, kScale};
    RngStream rng(21);
    const int flips = simulate_bits(1.0, cfg, rng);
    CHECK(std::abs(flips / 1e5 - 0.5) < 0.005);
}

TEST_CASE("estimate_integral inverts the flip statistics") {
    const ClassicalConfig cfg = table_config(30);

    const ClassicalEstimate zero = estimate_integral(0, cfg);
    CHECK(zero.i_hat == 0.0);
    CHECK(!std::signbit(zero.i_hat));
    CHECK_FALSE(zero.clamped);

    const ClassicalEstimate mid = estimate_integral(21, cfg);
    CHECK(mid.p_hat == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(mid.i_hat == doctest::Approx(-std::log(0.3) / 0.24).epsilon(1e-12));
    CHECK(mid.i_hat == doctest::Approx(5.0166).epsilon(1e-3));
    CHECK_FALSE(mid.clamped);

    const ClassicalEstimate full = estimate_integral(30, cfg);
    CHECK(full.clamped);
    CHECK(full.p_hat == 1.0);
    CHECK(std::isfinite(full.i_hat));
    CHECK(full.i_hat == doctest::Approx(std::log(60.0) / 0.24).epsilon(1e-12));

    CHECK_THROWS_AS(estimate_integral(31, cfg), std::invalid_argument);
    CHECK_THROWS_AS(estimate_integral(-1, cfg), std::invalid_argument);
}

TEST_CASE("estimator is nondecreasing in flip count") {
    const ClassicalConfig cfg = table_config(30);
    double prev = -1.0;
    for (int flips = 0; flips <= 30; ++flips) {
        const double i_hat = estimate_integral(flips, cfg).i_hat;
        CHECK(i_hat >= prev);
        prev = i_hat;
    }
}

TEST_CASE("uncertainty prediction") {
    CHECK(uncertainty(0.0, 0.24, 30) == 0.0);
    const double expected = std::sqrt(std::expm1(1.2)) / (0.24 * std::sqrt(30.0));
    CHECK(uncertainty(5.0, 0.24, 30) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(uncertainty(5.0, 0.24, 30) == doctest::Approx(1.159).epsilon(1e-3));
    // quadrupling N halves the spread
    CHECK(uncertainty(5.0, 0.24, 30) / uncertainty(5.0, 0.24, 120) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("optimize_lambda finds the stationary point") {
    // stationarity of sqrt(e^x - 1)/x: x e^x = 2(e^x - 1), root x ~ 1.5936
    const double best30 = optimize_lambda(5.0, 30);
    const double x = best30 * 5.0;
    CHECK(std::abs(x * std::exp(x) - 2.0 * std::expm1(x)) < 1e-6);
    CHECK(x == doctest::Approx(1.594).epsilon(1e-3));

    // independent of N
    CHECK(optimize_lambda(5.0, 1000) == doctest::Approx(best30).epsilon(1e-6));
    // scales as 1/M
    CHECK(optimize_lambda(10.0, 30) * 10.0 == doctest::Approx(best30 * 5.0).epsilon(1e-6));

    // the 1.2/M convention stays within 5% of the minimum value
    const double at_min = uncertainty(5.0, best30, 30);
    const double at_conventional = uncertainty(5.0, 1.2 / 5.0, 30);
    CHECK(at_conventional / at_min > 1.0);
    CHECK(at_conventional / at_min < 1.05);
    CHECK(at_min == doctest::Approx(1.134).epsilon(2e-3));
}

TEST_CASE("estimator mean converges to I") {
    // N = 1000 so the MLE bias term is negligible against the allowance
    const ClassicalConfig cfg{0.24, 1000, kScale};
    const int trials = 10000;
    RngStream root(77);
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(t));
        sum += estimate_integral(simulate_bits(5.0, cfg, rng), cfg).i_hat;
    }
    const double spread = uncertainty(5.0, 0.24, 1000);
    CHECK(std::abs(sum / trials - 5.0) < 5.0 * spread / std::sqrt(double(trials)) + 0.1 * spread);
}

TEST_CASE("empirical rms matches the predicted spread at N=30") {
    const ClassicalConfig cfg = table_config(30);
    const int trials = 100000;
    RngStream root(123);
    double sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(t));
        const double err = estimate_integral(simulate_bits(5.0, cfg, rng), cfg).i_hat - 5.0;
        sum_sq += err * err;
    }
    const double rms = std::sqrt(sum_sq / trials);
    CHECK(rms > 0.9);
    CHECK(rms < 1.5);
}

TEST_CASE("round trip through quantized flip counts") {
    const ClassicalConfig cfg = table_config(30);
    for (double i = 0.5; i < 9.1; i += 0.5) {
        const double p = flip_probability(i, cfg.lambda);
        if (p >= 0.9) {
            continue;
        }
        const int flips = static_cast<int>(std::lround(30.0 * p));
        const double i_hat = estimate_integral(flips, cfg).i_hat;
        // quantization bound: |round(Np)/N - p| <= 1/(2N), slope <= 1/(lambda(1-p'))
        const double p_quant = flips / 30.0;
        const double slope = 1.0 / (cfg.lambda * (1.0 - std::max(p, p_quant)));
        CHECK(std::abs(i_hat - i) <= slope / (2.0 * 30.0) * (1.0 + 1e-9));
    }
}

TEST_CASE("counter baseline") {
    const CounterConfig cfg{30, 10.0, kScale};
    RngStream rng(9);
    CHECK(counter_baseline(0.0, cfg, rng) == 0.0);
    CHECK_THROWS_AS(counter_baseline(-1.0, cfg, rng), std::domain_error);
    CHECK_THROWS_AS((CounterConfig{41, 10.0, kScale}.validate()), std::invalid_argument);

    // relative error ~ 1/sqrt(mu) with mu = 2^N I/(guard M) = 2^30 * 0.1
    const double mu = std::ldexp(1.0, 30) * 5.0 / 50.0;
    const double predicted = 1.0 / std::sqrt(mu);
    CHECK(predicted == doctest::Approx(1e-4).epsilon(0.05));
    const int trials = 2000;
    double sum_sq = 0.0;
    RngStream root(31);
    for (int t = 0; t < trials; ++t) {
        RngStream trial = root.substream(static_cast<std::uint64_t>(t));
        const double rel = (counter_baseline(5.0, cfg, trial) - 5.0) / 5.0;
        sum_sq += rel * rel;
    }
    const double rms_rel = std::sqrt(sum_sq / trials);
    CHECK(rms_rel > 0.8 * predicted);
    CHECK(rms_rel < 1.2 * predicted);
}
