#pragma once

#include <cstdint>
#include <cmath>

// Self-contained deterministic RNG. We avoid std::normal_distribution because
// its algorithm is implementation-defined; every stream here is a pure
// function of the seed, on any platform.
namespace clr {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Order-insensitive-free seed derivation: folds each tag through splitmix64.
inline std::uint64_t derive_seed(std::uint64_t seed) { return seed; }

template <typename... Rest>
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Rest... rest) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + tag);
    std::uint64_t mixed = splitmix64(s);
    return derive_seed(mixed, static_cast<std::uint64_t>(rest)...);
}

// xoshiro256++ seeded via splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Standard normal via Box-Muller; one spare cached per pair.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        has_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// One gaussian as a pure function of (seed, tags...); used where noise must be
// addressable per cell rather than per stream.
template <typename... Tags>
inline double gaussian_at(std::uint64_t seed, Tags... tags) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(tags)...));
    return rng.gaussian();
}

}  // namespace clr
