#pragma once

#include <cstdint>
#include <random>

namespace prada {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derive an independent stream seed from a master seed. Used so the
/// channel trace and the frame-error variates come from separate streams.
inline uint64_t derive_stream_seed(uint64_t master, uint64_t stream) {
    return splitmix64(master ^ (stream * 0xD2B74407B1CE6E93ull));
}

/// Deterministic random source. mt19937_64 output is pinned by the
/// standard; the distributions here are hand-rolled so results are
/// byte-identical across platforms and library versions.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    uint64_t bounded(uint64_t n) {
        // rejection sampling to avoid modulo bias
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform integer in [lo, hi] inclusive.
    int int_range(int lo, int hi) {
        return lo + static_cast<int>(bounded(static_cast<uint64_t>(hi - lo + 1)));
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace prada
