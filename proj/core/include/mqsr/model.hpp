#pragma once

// Two-block heterogeneous-noise linear model Y = X beta + Z.
//
// Indices are 0-based in the C++ API. Files and the CLI use 1-based indices.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mqsr {

/// Ground-truth s-sparse signal. Immutable after construction.
class SparseSignal {
public:
    /// Validates and sorts (support, values) by index. Throws DomainError on
    /// empty support, out-of-range or duplicate indices, or zero values.
    static SparseSignal make(std::size_t dimension, std::vector<std::size_t> support,
                             std::vector<double> values);
    /// beta = 1_S.
    static SparseSignal binary(std::size_t dimension, std::vector<std::size_t> support);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t sparsity() const noexcept { return support_.size(); }
    const std::vector<std::size_t>& support() const noexcept { return support_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double rho() const noexcept { return rho_; }
    bool is_binary() const noexcept { return binary_; }

    /// Value at coordinate j (0 off the support).
    double at(std::size_t j) const noexcept;
    Eigen::VectorXd dense() const;

    bool operator==(const SparseSignal&) const = default;

private:
    SparseSignal() = default;

    std::size_t dimension_ = 0;
    std::vector<std::size_t> support_;
    std::vector<double> values_;
    double rho_ = 0.0;
    bool binary_ = false;
};

struct NoiseProfile {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;

    std::size_t n() const noexcept { return n1 + n2; }
    /// (n1 sigma1^2 + n2 sigma2^2) / n.
    double sigma_avg_sq() const noexcept;
    /// Variance of row i (high-quality rows come first).
    double variance_of_row(std::size_t i) const noexcept { return i < n1 ? sigma1_sq : sigma2_sq; }
    /// Throws DomainError unless n >= 1, variances finite and >= 0, sigma1^2 <= sigma2^2.
    void validate() const;

    bool operator==(const NoiseProfile&) const = default;
};

struct MixedDataset {
    Eigen::MatrixXd design;        // n x p, rows [0, n1) high quality
    Eigen::VectorXd observations;  // length n
    NoiseProfile noise;
    std::optional<SparseSignal> truth;
    std::uint64_t seed = 0;

    std::size_t n() const noexcept { return static_cast<std::size_t>(design.rows()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(design.cols()); }
};

inline constexpr std::size_t kDefaultMaxEntries = 100'000'000;

/// Draws X_ij ~ N(0,1), Z_i ~ N(0, sigma_block^2) and returns Y = X beta + Z.
/// X entry (i, j) is normal index i*p + j of stream derive_key(seed, 1); W_i is
/// normal index i of derive_key(seed, 2); Z_i = sigma_block * W_i.
/// Throws ResourceError when n*p exceeds `max_entries`.
MixedDataset generate_dataset(const SparseSignal& signal, const NoiseProfile& noise,
                              std::uint64_t seed,
                              std::size_t max_entries = kDefaultMaxEntries);

enum class SnrRegime { HighSnr, LowSnr2HighSnr1, LowSnr, Intermediate };

std::string_view to_string(SnrRegime regime) noexcept;

inline constexpr double kHighSnrCutoff = 10.0;
inline constexpr double kLowSnrCutoff = 0.1;

struct SnrReport {
    double snr = 0.0;
    double snr1 = 0.0;
    double snr2 = 0.0;
    double sigma_avg_sq = 0.0;
    SnrRegime regime = SnrRegime::Intermediate;
};

SnrReport snr_report(std::size_t sparsity, const NoiseProfile& noise);
inline SnrReport snr_report(const SparseSignal& signal, const NoiseProfile& noise) {
    return snr_report(signal.sparsity(), noise);
}

/// Finite-size reporting labels; the cutoffs never enter any formula.
SnrRegime classify_regime(double snr1, double snr2);

/// |A symmetric-difference B|. Inputs need not be sorted.
std::size_t support_error(std::span<const std::size_t> estimate,
                          std::span<const std::size_t> truth);

inline constexpr double kDefaultZeroTol = 1e-9;

int sign_with_tolerance(double x, double zero_tol) noexcept;

/// sign(estimate_j) == sign(truth_j) for every j, with |x| <= zero_tol as 0.
bool signed_support_match(std::span<const double> estimate, const SparseSignal& truth,
                          double zero_tol = kDefaultZeroTol);

/// Number of coordinates whose tolerance-sign disagrees with the truth.
std::size_t sign_mismatches(std::span<const double> estimate, const SparseSignal& truth,
                            double zero_tol = kDefaultZeroTol);

}  // namespace mqsr
