#pragma once

#include <cstdint>
#include <limits>

namespace reinsnet {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, row, index). Columns use their own stream, so adding a
/// column never perturbs the draws of existing ones, and the output does
/// not depend on the order (or thread) in which rows are generated.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t row,
                                 std::uint64_t index = 0) const noexcept {
        std::uint64_t h = detail::splitmix64(seed_);
        h = detail::splitmix64(h ^ (stream * 0xD1B54A32D192ED03ULL));
        h = detail::splitmix64(h ^ (row * 0xAEF17502108EF2D9ULL));
        return detail::splitmix64(h ^ (index * 0x9E6C63D0676A9A99ULL));
    }

    /// Uniform on the open interval (0, 1).
    constexpr double uniform(std::uint64_t stream, std::uint64_t row,
                             std::uint64_t index = 0) const noexcept {
        return (static_cast<double>(bits(stream, row, index) >> 11) + 0.5) * 0x1.0p-53;
    }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

/// A sequential UniformRandomBitGenerator positioned at one (stream, row)
/// cell; used where an algorithm consumes a variable number of draws
/// (rejection samplers, treaty generators).
class CellEngine {
public:
    using result_type = std::uint64_t;

    constexpr CellEngine(const CounterRng& rng, std::uint64_t stream, std::uint64_t row) noexcept
        : rng_(rng), stream_(stream), row_(row) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return rng_.bits(stream_, row_, counter_++); }

    constexpr double uniform() noexcept { return rng_.uniform(stream_, row_, counter_++); }

private:
    CounterRng rng_;
    std::uint64_t stream_;
    std::uint64_t row_;
    std::uint64_t counter_ = 0;
};

}  // namespace reinsnet
