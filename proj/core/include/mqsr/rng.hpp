#pragma once

// Counter-based pseudo-random streams.
//
// Every draw is a pure function of (key, counter): the 64-bit word at
// position k of the stream keyed by `key` is
//
//     mix64(key + (k + 1) * 0x9E3779B97F4A7C15)
//
// where mix64 is the SplitMix64 finalizer (multipliers 0xBF58476D1CE4E5B9 and
// 0x94D049BB133111EB, shifts 30/27/31). Uniforms take the top 53 bits.
// Standard normals use Box-Muller on the word pair (2j, 2j+1): normal 2j is the
// cosine branch and normal 2j+1 the sine branch.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mqsr::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Key for an independent sub-stream `tag` of `seed`.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(seed ^ mix64(tag * kGolden + 0x632BE59BD9B4E019ULL));
}

/// Seed of trial `trial` at grid point `point` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                                    std::uint64_t trial) noexcept {
    return mix64(derive_key(master, point + 1) + (trial + 1) * kGolden);
}

class CounterStream {
public:
    constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t key() const noexcept { return key_; }

    constexpr std::uint64_t word(std::uint64_t counter) const noexcept {
        return mix64(key_ + (counter + 1) * kGolden);
    }

    /// Uniform on [0, 1).
    double uniform(std::uint64_t counter) const noexcept;
    /// Uniform on (0, 1].
    double uniform_open_zero(std::uint64_t counter) const noexcept;
    /// Integer uniform on [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const noexcept;

    /// Standard normal at normal-index `index`.
    double normal(std::uint64_t index) const noexcept;
    /// Writes normals at indices first, first+1, ... into `out`.
    void fill_normal(std::uint64_t first, std::span<double> out) const noexcept;

private:
    std::uint64_t key_;
};

/// Sequential view over a CounterStream, for call sites that just need
/// "the next" draw. Positions stay explicit through `position()`.
class Sequence {
public:
    explicit Sequence(std::uint64_t key) noexcept : stream_(key) {}

    double uniform() noexcept { return stream_.uniform(pos_++); }
    std::uint64_t below(std::uint64_t bound) noexcept { return stream_.below(pos_++, bound); }
    double normal() noexcept;
    std::uint64_t position() const noexcept { return pos_; }

private:
    CounterStream stream_;
    std::uint64_t pos_ = 0;
    std::uint64_t normal_pos_ = 0;
};

/// Uniformly random k-subset of {0..n-1}, sorted ascending (partial Fisher-Yates).
std::vector<std::size_t> random_subset(Sequence& seq, std::size_t n, std::size_t k);

}  // namespace mqsr::rng
