#pragma once

#include <cstdint>
#include <random>

namespace obmbo {

/// Seeded random source with a bit-reproducible mapping to doubles.
///
/// std::uniform_real_distribution is implementation-defined, so runs would
/// not replay across standard libraries. We draw raw 64-bit words from
/// mt19937_64 and keep the top 53 bits, giving canonical doubles in [0, 1).
/// Manifests record this as "mt19937_64-canonical53".
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static constexpr const char* algorithm() { return "mt19937_64-canonical53"; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), exactly (x >> 11) * 2^-53.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound) via rejection, bias-free.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % bound;
    }

    /// Fair +1/-1 draw.
    int sign() { return (gen_() & 1u) ? 1 : -1; }

private:
    std::mt19937_64 gen_;
};

} // namespace obmbo
