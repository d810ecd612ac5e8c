// Deterministic counter-free RNG streams. Every random draw in the library
// flows from one 64-bit seed through named sub-streams (per edge, per vertex,
// per replica), so lazy and eager simulations see identical randomness.
#pragma once

#include <cmath>
#include <cstdint>

namespace avgproc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless mix of two words, used for sub-seed derivation.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

inline std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(a, b), c);
}

// Small self-contained generator; quality is adequate for Monte Carlo work
// here and the state is trivially serializable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform on (0,1]: never returns 0, so log() below is safe.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Uniform on [0,1).
    double next_unit_half_open() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

    // Box-Muller, one value per call (the second is discarded to keep the
    // per-vertex draw count fixed).
    double next_gaussian(double mean, double stddev) {
        double u1 = next_unit();
        double u2 = next_unit_half_open();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

}  // namespace avgproc
