#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace metro {

/// Counter-based SplitMix64 stream.
///
/// The i-th draw of a stream with seed s is mix64(s + (i + 1) * 0x9E3779B97F4A7C15),
/// where mix64 is the SplitMix64 finalizer (Steele, Lea, Flood 2014). All
/// higher-level draws (uniforms, normals, shuffles) are built from this stream
/// with portable arithmetic, so a seed regenerates the same data on any
/// platform that provides IEEE doubles and a conforming libm.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

    std::uint64_t next_u64() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Box-Muller transform. Consumes two draws per call.
    double normal() noexcept;

    /// Uniform integer in [0, n); n must be positive. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) noexcept;

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t position() const noexcept { return counter_; }

    /// Independent child seed for a named sub-stream.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept;

    static std::uint64_t mix64(std::uint64_t z) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace metro
