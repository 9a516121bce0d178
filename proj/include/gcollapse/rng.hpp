#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gcollapse {

// Seedable, splittable generator. Child streams are derived from the parent
// seed and a stream index only, so work can be partitioned across threads
// without changing the drawn values.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng split(std::uint64_t stream) const {
        return Rng(mix(seed_ ^ mix(stream + 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t next() { return engine_(); }

    // UniformRandomBitGenerator interface, for <random> distributions.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open_below() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // Exponential with density rate * exp(-rate * x), x >= 0.
    double exponential(double rate) { return -std::log(uniform_open_below()) / rate; }

    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finaliser
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace gcollapse
