#pragma once

#include <cstdint>
#include <stdexcept>

namespace permci {

// SplitMix64 (Steele, Lea & Flood 2014; public-domain reference constants).
// A 64-bit counter generator: state advances by a fixed increment and each
// output is a finalizer of the state, so the k-th draw is a pure function of
// (seed, k). All randomness in this library flows through this generator and
// is consumed in a documented, fixed order, which makes every downstream
// result reproducible from its seed alone.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound) by rejection of the low remainder zone
    // (the arc4random_uniform construction).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("SplitMix64::below: bound must be positive");
        const std::uint64_t threshold = (0 - bound) % bound; // 2^64 mod bound
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

    // Uniform double in [0, 1) from the top 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via the inverse CDF applied to uniform01(); uniform01()
    // never returns exactly 0 or 1 after the (0,1) clamp inside the quantile.
    double standard_normal();

private:
    std::uint64_t state_;
};

// Normal quantile function, algorithm AS 241 (Wichura 1988), double precision
// rational approximations. Pure arithmetic plus sqrt/log.
double normal_quantile(double p);

// Deterministic per-task seed derived from a master seed and a task index.
// Used for replicate streams so parallel execution order cannot matter.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace permci
