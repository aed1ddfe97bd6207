#pragma once

// Combinatorial support decoders over binary s-sparse candidates beta = 1_S.
//
// Agnostic objective:  ||Y - X 1_S||^2
// Informed objective:  sum_i (Y_i - <x_i, 1_S>)^2 / sigma_{block(i)}^2

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mqsr/model.hpp"

namespace mqsr::decoders {

enum class Objective { Agnostic, Informed };

struct DecodeResult {
    std::vector<std::size_t> support;  // sorted, 0-based
    double loss = 0.0;
    std::uint64_t scanned = 0;
    bool exhaustive = false;
};

inline constexpr std::uint64_t kDefaultCandidateCap = 2'000'000;

/// Above this many rows the loss uses Neumaier-compensated summation.
inline constexpr std::size_t kCompensatedSumRows = 10'000;

double support_loss(const MixedDataset& dataset, std::span<const std::size_t> support,
                    Objective objective);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// The colex-rank-th s-subset of {0..} (combinatorial number system).
std::vector<std::size_t> colex_unrank(std::uint64_t rank, std::size_t s);

struct ExhaustiveOptions {
    std::uint64_t candidate_cap = kDefaultCandidateCap;
    std::size_t threads = 1;  // 0 = hardware concurrency
};

/// Scans every s-subset in colex order and returns the minimiser of
/// (loss, lexicographic support). The result does not depend on `threads`.
/// Throws ResourceError when C(p, s) exceeds the cap.
DecodeResult decode_exhaustive(const MixedDataset& dataset, std::size_t s, Objective objective,
                               const ExhaustiveOptions& options = {});

/// Multi-restart steepest-descent single-swap hill climbing from seeded random
/// s-subsets. Returns a swap-local optimum; exhaustive = false.
DecodeResult decode_local_search(const MixedDataset& dataset, std::size_t s, Objective objective,
                                 std::size_t restarts, std::uint64_t seed);

}  // namespace mqsr::decoders
