#pragma once

// Deterministic random stream for the simulator. std::mt19937_64 is bit-exact
// across platforms by the standard; the uniform and normal transforms are
// spelled out here because the standard library's distributions are
// implementation-defined. One normal() consumes exactly two engine draws.

#include <cmath>
#include <cstdint>
#include <random>

namespace aircal {

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the (0, 1] mapping keeps log() finite.
    double normal() {
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double normal(double sigma) { return sigma * normal(); }

private:
    std::mt19937_64 engine_;
};

// splitmix64; used to derive independent per-run seeds from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + index * 0x9E3779B97F4A7C15ull + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace aircal
