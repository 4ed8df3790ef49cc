#pragma once

#include <cstdint>
#include <cmath>

namespace cim {

// SplitMix64 scrambler. Used both as the stream generator and to derive
// per-trajectory seeds, so results never depend on thread scheduling.
inline constexpr uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// seed_i = hash(master, instance, trajectory). Adding instances or
// trajectories never shifts existing streams.
inline constexpr uint64_t derive_seed(uint64_t master, uint64_t instance_id, uint64_t trajectory) {
    uint64_t h = mix64(master);
    h = mix64(h ^ 0x9d5c0b92aa3c8f1bULL ^ instance_id);
    h = mix64(h ^ 0x2545f4914f6cdd1dULL ^ trajectory);
    return h;
}

// Counter-style PRNG with explicit, portable distributions. std:: distributions
// are implementation-defined, which would break the bit-reproducibility contract.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1]; safe under log()
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // One standard normal via the Box-Muller cosine branch; always consumes
    // exactly two u64 draws so streams stay countable.
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        ++normal_count_;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Total normals handed out; lets tests audit per-step noise budgets.
    uint64_t normal_count() const { return normal_count_; }

private:
    uint64_t state_;
    uint64_t normal_count_ = 0;
};

} // namespace cim
