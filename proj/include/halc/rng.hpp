#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace halc {

// Deterministic RNG wrapper. The engine (mt19937_64) is fully specified by
// the standard; the distributions below are implemented from raw 64-bit
// draws because std:: distributions are implementation-defined and would
// break cross-platform reproducibility.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive bounds, bias-free via rejection
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
        uint64_t lim = UINT64_MAX - UINT64_MAX % range;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= lim);
        return lo + static_cast<int64_t>(x % range);
    }

    // Box-Muller; consumes exactly two uniforms per call
    double normal(double mu, double sigma) {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mu + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Labeled seed derivation. Stage seeds are hash(master, label) so adding
    // a stage never perturbs the streams of existing ones.
    static uint64_t derive(uint64_t seed, std::string_view label) {
        return mix(seed ^ mix(fnv1a(label)));
    }

    static uint64_t derive(uint64_t seed, std::string_view label, uint64_t index) {
        return mix(derive(seed, label) ^ mix(index + 0x517cc1b727220a95ull));
    }

  private:
    static uint64_t mix(uint64_t x) {  // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    static uint64_t fnv1a(std::string_view s) {
        uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h = (h ^ c) * 0x100000001b3ull;
        }
        return h;
    }

    std::mt19937_64 eng_;
};

}  // namespace halc
