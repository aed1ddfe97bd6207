#include "mqsr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mqsr/errors.hpp"
#include "mqsr/rng.hpp"

namespace mqsr {

SparseSignal SparseSignal::make(std::size_t dimension, std::vector<std::size_t> support,
                                std::vector<double> values) {
    if (dimension == 0) throw DomainError("signal dimension must be positive");
    if (support.empty()) throw DomainError("signal support must be nonempty");
    if (support.size() != values.size()) {
        throw DomainError("signal support and values differ in length");
    }
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });

    SparseSignal out;
    out.dimension_ = dimension;
    out.support_.reserve(support.size());
    out.values_.reserve(values.size());
    for (std::size_t k : order) {
        const std::size_t idx = support[k];
        const double v = values[k];
        if (idx >= dimension) {
            throw DomainError("support index " + std::to_string(idx) + " out of range");
        }
        if (!out.support_.empty() && out.support_.back() == idx) {
            throw DomainError("duplicate support index " + std::to_string(idx));
        }
        if (!std::isfinite(v) || v == 0.0) {
            throw DomainError("signal values on the support must be finite and nonzero");
        }
        out.support_.push_back(idx);
        out.values_.push_back(v);
    }
    out.rho_ = std::abs(out.values_.front());
    for (double v : out.values_) out.rho_ = std::min(out.rho_, std::abs(v));
    out.binary_ = std::all_of(out.values_.begin(), out.values_.end(),
                              [](double v) { return v == 1.0 || v == -1.0; });
    return out;
}

SparseSignal SparseSignal::binary(std::size_t dimension, std::vector<std::size_t> support) {
    std::vector<double> ones(support.size(), 1.0);
    return make(dimension, std::move(support), std::move(ones));
}

double SparseSignal::at(std::size_t j) const noexcept {
    const auto it = std::lower_bound(support_.begin(), support_.end(), j);
    if (it == support_.end() || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - support_.begin())];
}

Eigen::VectorXd SparseSignal::dense() const {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension_));
    for (std::size_t k = 0; k < support_.size(); ++k) {
        beta(static_cast<Eigen::Index>(support_[k])) = values_[k];
    }
    return beta;
}

double NoiseProfile::sigma_avg_sq() const noexcept {
    return (static_cast<double>(n1) * sigma1_sq + static_cast<double>(n2) * sigma2_sq) /
           static_cast<double>(n());
}

void NoiseProfile::validate() const {
    if (n() == 0) throw DomainError("noise profile needs n1 + n2 >= 1");
    if (!std::isfinite(sigma1_sq) || !std::isfinite(sigma2_sq) || sigma1_sq < 0.0 ||
        sigma2_sq < 0.0) {
        throw DomainError("noise variances must be finite and nonnegative");
    }
    if (sigma1_sq > sigma2_sq) {
        throw DomainError("high-quality variance sigma1^2 must not exceed sigma2^2");
    }
}

MixedDataset generate_dataset(const SparseSignal& signal, const NoiseProfile& noise,
                              std::uint64_t seed, std::size_t max_entries) {
    noise.validate();
    const std::size_t n = noise.n();
    const std::size_t p = signal.dimension();
    if (p != 0 && n > max_entries / p) {
        throw ResourceError("dataset of " + std::to_string(n) + " x " + std::to_string(p) +
                            " exceeds the cap of " + std::to_string(max_entries) + " entries");
    }

    const rng::CounterStream design_stream(rng::derive_key(seed, 1));
    const rng::CounterStream noise_stream(rng::derive_key(seed, 2));

    MixedDataset ds;
    ds.noise = noise;
    ds.truth = signal;
    ds.seed = seed;
    ds.design.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));

    std::vector<double> row(p);
    for (std::size_t i = 0; i < n; ++i) {
        design_stream.fill_normal(static_cast<std::uint64_t>(i) * p, row);
        for (std::size_t j = 0; j < p; ++j) {
            ds.design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
        }
    }

    ds.observations.resize(static_cast<Eigen::Index>(n));
    const double sd1 = std::sqrt(noise.sigma1_sq);
    const double sd2 = std::sqrt(noise.sigma2_sq);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        double signal_part = 0.0;
        for (std::size_t k = 0; k < signal.sparsity(); ++k) {
            signal_part += ds.design(r, static_cast<Eigen::Index>(signal.support()[k])) *
                           signal.values()[k];
        }
        const double sd = i < noise.n1 ? sd1 : sd2;
        ds.observations(r) = signal_part + sd * noise_stream.normal(i);
    }
    return ds;
}

std::string_view to_string(SnrRegime regime) noexcept {
    switch (regime) {
        case SnrRegime::HighSnr: return "HighSNR";
        case SnrRegime::LowSnr2HighSnr1: return "LowSnr2HighSnr1";
        case SnrRegime::LowSnr: return "LowSNR";
        case SnrRegime::Intermediate: return "Intermediate";
    }
    return "Intermediate";
}

SnrRegime classify_regime(double snr1, double snr2) {
    if (!(snr2 > 0.0) || snr2 > snr1) {
        throw DomainError("classify_regime requires 0 < snr2 <= snr1");
    }
    if (snr2 >= kHighSnrCutoff) return SnrRegime::HighSnr;
    if (snr1 <= kLowSnrCutoff) return SnrRegime::LowSnr;
    if (snr2 <= kLowSnrCutoff && snr1 >= kHighSnrCutoff) return SnrRegime::LowSnr2HighSnr1;
    return SnrRegime::Intermediate;
}

SnrReport snr_report(std::size_t sparsity, const NoiseProfile& noise) {
    if (sparsity == 0) throw DomainError("snr_report requires s >= 1");
    noise.validate();
    if (noise.sigma1_sq <= 0.0) throw DomainError("snr_report requires positive variances");
    const double s = static_cast<double>(sparsity);
    SnrReport r;
    r.sigma_avg_sq = noise.sigma_avg_sq();
    r.snr = s / r.sigma_avg_sq;
    r.snr1 = s / noise.sigma1_sq;
    r.snr2 = s / noise.sigma2_sq;
    r.regime = classify_regime(r.snr1, r.snr2);
    return r;
}

std::size_t support_error(std::span<const std::size_t> estimate,
                          std::span<const std::size_t> truth) {
    std::vector<std::size_t> a(estimate.begin(), estimate.end());
    std::vector<std::size_t> b(truth.begin(), truth.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<std::size_t> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(diff));
    return diff.size();
}

int sign_with_tolerance(double x, double zero_tol) noexcept {
    if (std::abs(x) <= zero_tol) return 0;
    return x > 0.0 ? 1 : -1;
}

std::size_t sign_mismatches(std::span<const double> estimate, const SparseSignal& truth,
                            double zero_tol) {
    if (estimate.size() != truth.dimension()) {
        throw DomainError("estimate length differs from signal dimension");
    }
    std::size_t count = 0;
    for (std::size_t j = 0; j < estimate.size(); ++j) {
        const double t = truth.at(j);
        const int truth_sign = t == 0.0 ? 0 : (t > 0.0 ? 1 : -1);
        if (sign_with_tolerance(estimate[j], zero_tol) != truth_sign) ++count;
    }
    return count;
}

bool signed_support_match(std::span<const double> estimate, const SparseSignal& truth,
                          double zero_tol) {
    return sign_mismatches(estimate, truth, zero_tol) == 0;
}

}  // namespace mqsr
