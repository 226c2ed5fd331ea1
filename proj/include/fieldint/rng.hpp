#pragma once

#include <cstdint>

namespace fieldint {

// Deterministic 64-bit random stream with cheap hierarchical substreams.
//
// next_u64() is splitmix64: the state advances by the golden-ratio constant
// and the splitmix finalizer is applied. substream(label) derives a child
// state as mix(state ^ (mix(label) + 0x9e3779b97f4a7c15)) without touching
// the parent, so a tree of streams addressed by (seed, label, label, ...)
// is reproducible on any platform; everything is unsigned 64-bit arithmetic.
//
// Substreams are derived from the *current* state: derive children before
// consuming values if the labels are meant to address a fixed tree.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    [[nodiscard]] RngStream substream(std::uint64_t label) const;

    // Derives a child from the next raw output, advancing this stream.
    // For anonymous forks where no stable label exists.
    RngStream split();

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    bool bernoulli(double p) { return next_double() < p; }

    // Poisson sample with the given mean; sequential inversion for small
    // means, Hormann's PTRD transformed rejection otherwise.
    std::int64_t poisson(double mean);

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

} // namespace fieldint
