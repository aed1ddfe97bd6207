#pragma once

// Sample-size planning: recovery thresholds, the linear sufficient
// conditions for the agnostic and informed combinatorial decoders, the price
// of quality, and (n1, n2) frontiers.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mqsr::planner {

enum class Setting { Agnostic, Informed, GeneralSigma };
enum class ThresholdKind { NStar, NInf, NAlg };

std::string_view to_string(Setting setting) noexcept;

struct RegimeSpec {
    enum class Kind { Sublinear, Linear };

    Kind kind = Kind::Sublinear;
    std::size_t p = 0;
    std::size_t s = 0;
    std::optional<double> alpha;  // required iff Linear

    static RegimeSpec sublinear(std::size_t p, std::size_t s);
    /// s = round(alpha * p).
    static RegimeSpec linear(std::size_t p, double alpha);

    void validate() const;
};

/// -x ln x - (1-x) ln(1-x). At x in {0, 1} returns 0 only when
/// `allow_boundary` is set; otherwise throws DomainError.
double binary_entropy(double x, bool allow_boundary = false);

/// NStar: 2 s ln(p/s) (Sublinear) or 2 h(alpha) p (Linear).
/// NInf:  2 s ln(p/s) / ln s, requires s >= 2.
/// NAlg:  2 s ln(p - s) + s + 1.
double recovery_threshold(ThresholdKind kind, const RegimeSpec& regime);

struct SufficiencyInputs {
    Setting setting = Setting::Agnostic;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;
    std::size_t s = 1;
    double delta = 0.1;
    double epsilon = 0.5;
    RegimeSpec regime;
    /// Per-sample variances; GeneralSigma only. The setting used for the
    /// per-sample terms is `general_form`.
    std::vector<double> general_sigmas_sq;
    Setting general_form = Setting::Agnostic;
};

struct SufficiencyCheck {
    Setting setting = Setting::Agnostic;
    double coeff1 = 0.0;  // per high-quality sample log factor
    double coeff2 = 0.0;  // per low-quality sample log factor
    std::vector<double> per_sample_terms;  // GeneralSigma only
    double lhs = 0.0;
    double n_star = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    bool holds = false;

    double target() const noexcept { return (1.0 + epsilon) * n_star; }
};

/// Per-sample factor of the agnostic condition for a sample with variance
/// `sigma_sq` when the largest variance is `sigma_max_sq`:
/// ln(1 + delta (2 sigma_max^2 - sigma^2) s / (2 sigma_max^4)).
double agnostic_term(double sigma_sq, double sigma_max_sq, std::size_t s, double delta);
/// ln(1 + delta s / (2 sigma^2)).
double informed_term(double sigma_sq, std::size_t s, double delta);

SufficiencyCheck check_sufficient(const SufficiencyInputs& in);

/// alpha1 / alpha2 for the agnostic or informed coefficients.
double price_of_quality(Setting setting, double sigma1_sq, double sigma2_sq, std::size_t s,
                        double delta);

enum class AsymptoticRegime { HighSnr2, LowSnr2, HighSnr, LowSnr, LowSnr2HighSnr1 };

struct AsymptoticPoq {
    double value = 0.0;
    bool order_only = false;  // value is only known up to a Theta(.) constant
};

/// Leading-order price of quality. The agnostic mixed regime
/// (LowSnr2HighSnr1) has no stated asymptote and is rejected.
AsymptoticPoq poq_asymptotic(Setting setting, AsymptoticRegime regime, double sigma1_sq,
                             double sigma2_sq, std::size_t s);

struct FrontierPoint {
    std::size_t n1 = 0;
    std::size_t n2 = 0;         // minimal integer n2
    double n2_continuous = 0.0;  // max(0, ((1+eps) n* - n1 alpha1) / alpha2)
};

/// Minimal n2 per n1 for the two-block condition described by `tmpl`
/// (its n1/n2 fields are ignored).
std::vector<FrontierPoint> sample_frontier(const SufficiencyInputs& tmpl,
                                           std::span<const std::size_t> n1_grid);

}  // namespace mqsr::planner
