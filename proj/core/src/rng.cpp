#include "mqsr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

namespace mqsr::rng {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

namespace {

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

double CounterStream::uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(word(counter) >> 11) * kTwoPow53Inv;
}

double CounterStream::uniform_open_zero(std::uint64_t counter) const noexcept {
    return static_cast<double>((word(counter) >> 11) + 1) * kTwoPow53Inv;
}

std::uint64_t CounterStream::below(std::uint64_t counter, std::uint64_t bound) const noexcept {
    // Multiply-shift reduction; bias is below 2^-64 * bound and irrelevant here.
    const u128 wide = static_cast<u128>(word(counter)) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
}

namespace {

// Both branches are always computed, out of line, so single draws and bulk
// fills produce identical bits.
[[gnu::noinline]] void box_muller(double u1, double u2, double& c, double& s) noexcept {
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    c = radius * std::cos(angle);
    s = radius * std::sin(angle);
}

}  // namespace

double CounterStream::normal(std::uint64_t index) const noexcept {
    const std::uint64_t pair = index >> 1;
    double c = 0.0, s = 0.0;
    box_muller(uniform_open_zero(2 * pair), uniform(2 * pair + 1), c, s);
    return (index & 1U) ? s : c;
}

void CounterStream::fill_normal(std::uint64_t first, std::span<double> out) const noexcept {
    std::size_t k = 0;
    std::uint64_t index = first;
    if ((index & 1U) && k < out.size()) {
        out[k++] = normal(index++);
    }
    while (k + 1 < out.size()) {
        const std::uint64_t pair = index >> 1;
        box_muller(uniform_open_zero(2 * pair), uniform(2 * pair + 1), out[k], out[k + 1]);
        k += 2;
        index += 2;
    }
    if (k < out.size()) {
        out[k] = normal(index);
    }
}

double Sequence::normal() noexcept {
    // Normals live on a sibling key so they never share words with uniforms.
    const CounterStream normals(mix64(stream_.key() ^ 0xD1B54A32D192ED03ULL));
    return normals.normal(normal_pos_++);
}

std::vector<std::size_t> random_subset(Sequence& seq, std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k && i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(seq.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(std::min(k, n));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace mqsr::rng
