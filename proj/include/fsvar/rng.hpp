#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace fsvar {

// Deterministic random number generator built on xoshiro256++ with splitmix64
// seeding.  All samplers in this project draw through this class rather than
// <random> so that draws are bit-identical across platforms, standard library
// versions and thread counts.
//
// Parallel blocks derive one independent stream per work unit via
// Rng::stream(seed, sweep, block, unit); a unit's draws then depend only on
// those four integers, never on which thread executed it.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Independent stream keyed by (master seed, sweep index, sampler block,
    // work unit).  Distinct keys give statistically independent streams.
    static Rng stream(std::uint64_t seed, std::uint64_t sweep,
                      std::uint64_t block, std::uint64_t unit);

    std::uint64_t next_u64();

    // Uniform on (0, 1); never returns 0 or 1 exactly.
    double uniform();

    // Standard normal via Box-Muller (second draw of each pair is cached).
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    double exponential(double rate = 1.0);

    // Gamma(shape, rate) with mean shape/rate, Marsaglia-Tsang squeeze method.
    double gamma(double shape, double rate);

    double beta(double a, double b);

    double chi_squared(double df) { return gamma(0.5 * df, 0.5); }

    // Index draw proportional to `weights` (unnormalised, non-negative).
    int categorical(std::span<const double> weights);

private:
    std::array<std::uint64_t, 4> state_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fsvar
