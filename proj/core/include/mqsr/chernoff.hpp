#pragma once

// Chernoff bounds on the misranking probability P(loss(S) <= loss(S*)) for a
// single wrong binary support S, where m = |S \ S*| + |S* \ S|.
//
// Per observation with variance sigma^2 and theta >= 0 the agnostic block MGF is
//     (1 - 2m(-theta + 2 theta^2 sigma^2))^{-1/2}
// and the informed (variance-weighted) one is
//     (1 - 2m(-theta + 2 theta^2) / sigma^2)^{-1/2},
// both +inf outside their finiteness domain.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mqsr/model.hpp"

namespace mqsr::chernoff {

enum class Setting { Agnostic, Informed };
enum class Block { HQ, LQ };

struct ChernoffQuery {
    Setting setting = Setting::Agnostic;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;
    std::size_t m = 2;
    std::optional<double> theta;

    /// Throws DomainError unless m >= 1, 0 < sigma1^2 <= sigma2^2 (finite),
    /// and theta (when present) is finite and >= 0.
    void validate() const;
};

/// Smallest even m with m >= 2 delta s: the lightest misranking a delta-error
/// event can involve.
std::size_t overlap_deficit(double delta, std::size_t s);

/// log of the block MGF at theta; +inf outside the finiteness domain.
double log_block_mgf(const ChernoffQuery& query, Block block, double theta);
/// Block MGF at query.theta; +inf outside the finiteness domain.
double block_mgf(const ChernoffQuery& query, Block block);

/// n1 log M_HQ(theta) + n2 log M_LQ(theta).
double log_bound_at(const ChernoffQuery& query, double theta);

/// Upper end of the joint finiteness domain over blocks with n_k > 0
/// (+inf if both blocks are empty).
double theta_max(const ChernoffQuery& query);

/// 1/(4 sigma2^2) for agnostic, 1/4 for informed.
double relaxed_theta(const ChernoffQuery& query);

/// Closed-form bound at the relaxed theta (exact optimum for informed).
double log_chernoff_bound(const ChernoffQuery& query);
double chernoff_bound(const ChernoffQuery& query);

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (Cardano / trigonometric form,
/// two Newton polish steps), ascending. Degenerate leading terms fall back
/// to the quadratic or linear formula.
std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0);

struct ThetaOptimum {
    double theta = 0.0;
    double log_bound = 0.0;
    bool from_cubic = false;    // false: relaxed theta kept
    std::vector<double> roots;  // all real roots of the stationarity cubic
};

/// Minimiser of the agnostic log-bound over the stationarity cubic's feasible
/// positive roots, compared against the relaxed theta.
ThetaOptimum optimal_theta_agnostic(const ChernoffQuery& query);

struct MisrankEstimate {
    double estimate = 0.0;
    double ci95 = 0.0;  // Clopper-Pearson half-width
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
};

/// Monte Carlo P(loss(S) <= loss(S*)) under fresh Gaussian columns and noise
/// per trial (trial t uses derive_seed(seed, 0, t)). `truth` must be binary
/// and `candidate` an s-subset. The result does not depend on `threads`.
MisrankEstimate empirical_misrank(const SparseSignal& truth, const NoiseProfile& noise,
                                  const std::vector<std::size_t>& candidate,
                                  Setting setting, std::uint64_t trials, std::uint64_t seed,
                                  std::size_t threads = 1);

}  // namespace mqsr::chernoff
