#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace snlab::rng {

// SplitMix64 finalizer. Used both as a stream splitter and as a hash mixer
// so that replicate seeds are decorrelated regardless of scheduling order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Seed for replicate i of a named experiment under a master seed.
// Documented splitting rule: chain three SplitMix64 rounds over
// (master, fnv1a(experiment_id), replicate). Order-independent by design.
inline std::uint64_t replicate_seed(std::uint64_t master, std::string_view experiment_id,
                                    std::uint64_t replicate) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ fnv1a(experiment_id));
    s = splitmix64(s ^ (0x9E3779B97F4A7C15ULL * (replicate + 1)));
    return s;
}

// Deterministic generator with explicit uniform/normal pipelines.
// std::mt19937_64 output is fully specified by the standard; doubles are
// built by bit manipulation, normals by the polar method, so the sampled
// sequence depends only on the seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_replicate(std::uint64_t master, std::string_view experiment_id,
                             std::uint64_t replicate) {
        return Rng(replicate_seed(master, experiment_id, replicate));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Marsaglia polar method (second value cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // +1 or -1 with equal probability.
    int rademacher() { return (engine_() >> 63) ? 1 : -1; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace snlab::rng
