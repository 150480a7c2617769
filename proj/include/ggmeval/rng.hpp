#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ggm {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Fixed rule for expanding one seed into independent per-trial / per-purpose
// streams. Used everywhere a seed is handed down, so reports can state it once.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 0x51ed270b0a1cd1aaULL));
}

// Deterministic RNG. mt19937_64 output is fully specified by the standard;
// the float/int conversions are hand-rolled because std::*_distribution is
// implementation-defined and would break reproducibility across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Unbiased-enough index in [0, n) (Lemire multiply-shift).
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Inclusive integer range.
    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(uniform_index(static_cast<std::size_t>(hi - lo + 1)));
    }

    // Box-Muller; two uniforms per sample, nothing cached.
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace ggm
