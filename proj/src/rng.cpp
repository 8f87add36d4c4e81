#include "fsvar/rng.hpp"

#include <cmath>
#include <numbers>

#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t sweep, std::uint64_t block,
                std::uint64_t unit) {
    // Absorb the key components through a splitmix64 chain; each component is
    // pre-multiplied by an odd constant so that (sweep, block, unit)
    // permutations land in different states.
    std::uint64_t x = seed;
    (void)splitmix64(x);
    x ^= splitmix64(x) ^ (sweep * 0xA24BAED4963EE407ULL);
    x ^= splitmix64(x) ^ (block * 0x9FB21C651E98DF25ULL);
    x ^= splitmix64(x) ^ (unit * 0xD6E8FEB86659FD93ULL);
    Rng rng(0);
    for (auto& word : rng.state_) word = splitmix64(x);
    return rng;
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    // 53 random bits into (0, 1); the +0.5 offset keeps both endpoints open.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double Rng::exponential(double rate) {
    if (!(rate > 0.0)) throw NumericError("exponential rate must be positive");
    return -std::log(uniform()) / rate;
}

double Rng::gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw NumericError("gamma shape and rate must be positive");
    if (shape < 1.0) {
        // Boost to shape + 1 and correct with a uniform power (Marsaglia-Tsang).
        const double u = uniform();
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

double Rng::beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

int Rng::categorical(std::span<const double> weights) {
    if (weights.empty()) throw NumericError("categorical requires at least one weight");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw NumericError("categorical weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw NumericError("categorical weights sum to zero");
    const double target = uniform() * total;
    double accum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        accum += weights[i];
        if (target < accum) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

}  // namespace fsvar
