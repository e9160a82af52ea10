#pragma once

#include <cstddef>
#include <cstdint>

namespace holo {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Deterministic RNG with a stable cross-platform bit stream.
/// std::mt19937 would also be portable, but the standard distributions are
/// not; all floating-point draws here come from fixed bit manipulation.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    uint64_t uniform_int(uint64_t n) { return next_u64() % n; }

    /// Derive an independent stream, e.g. one per record or per epoch.
    Rng fork(uint64_t salt) const { return Rng(splitmix64(state_ ^ splitmix64(salt))); }

  private:
    uint64_t state_;
};

/// Hash for stable lattice noise: maps an integer key tuple to [0, 1).
inline double hash_to_unit(uint64_t seed, int64_t a, int64_t b, int64_t c) {
    uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<uint64_t>(a) * 0x9E3779B97F4A7C15ull);
    h = splitmix64(h ^ static_cast<uint64_t>(b) * 0xC2B2AE3D27D4EB4Full);
    h = splitmix64(h ^ static_cast<uint64_t>(c) * 0x165667B19E3779F9ull);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline uint64_t fnv1a64(const void* bytes, size_t n, uint64_t h = 0xCBF29CE484222325ull) {
    const unsigned char* p = static_cast<const unsigned char*>(bytes);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace holo
