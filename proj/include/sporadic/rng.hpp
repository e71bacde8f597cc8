#pragma once

#include <cstdint>
#include <span>

namespace sporadic {

/// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Maps the top 53 bits of a word to a double in [0, 1).
constexpr double unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Keyed counter hash of (seed, coordinates): the same inputs always give the
/// same word, independent of how many other coordinates are hashed or in which order.
inline std::uint64_t keyed_hash(std::uint64_t seed, std::span<const std::int64_t> coords) noexcept {
    std::uint64_t h = mix64(seed + kGoldenGamma);
    for (const auto c : coords) {
        h = mix64(h ^ (static_cast<std::uint64_t>(c) + kGoldenGamma + (h << 6) + (h >> 2)));
    }
    return mix64(h + static_cast<std::uint64_t>(coords.size()));
}

/// Small counter-mode stream for test and quadrature sampling: word k is mix64(key + (k+1)*gamma).
class CounterStream {
public:
    explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t next_word() noexcept { return mix64(key_ + (++counter_) * kGoldenGamma); }
    double next_unit() noexcept { return unit_interval(next_word()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace sporadic
