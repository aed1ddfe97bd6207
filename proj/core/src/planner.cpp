#include "mqsr/planner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "mqsr/errors.hpp"

namespace mqsr::planner {

std::string_view to_string(Setting setting) noexcept {
    switch (setting) {
        case Setting::Agnostic: return "agnostic";
        case Setting::Informed: return "informed";
        case Setting::GeneralSigma: return "general_sigma";
    }
    return "agnostic";
}

RegimeSpec RegimeSpec::sublinear(std::size_t p, std::size_t s) {
    RegimeSpec r{Kind::Sublinear, p, s, std::nullopt};
    r.validate();
    return r;
}

RegimeSpec RegimeSpec::linear(std::size_t p, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("linear regime needs alpha in (0,1)");
    const auto s = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(p)));
    RegimeSpec r{Kind::Linear, p, s, alpha};
    r.validate();
    return r;
}

void RegimeSpec::validate() const {
    if (p == 0 || s == 0) throw DomainError("regime needs p >= 1 and s >= 1");
    if (kind == Kind::Sublinear) {
        if (s >= p) throw DomainError("sublinear regime needs s < p");
        return;
    }
    if (!alpha || !(*alpha > 0.0 && *alpha < 1.0)) {
        throw DomainError("linear regime needs alpha in (0,1)");
    }
    if (std::abs(static_cast<double>(s) - *alpha * static_cast<double>(p)) > 0.5) {
        throw DomainError("linear regime needs |s - alpha p| <= 0.5");
    }
}

double binary_entropy(double x, bool allow_boundary) {
    if (x == 0.0 || x == 1.0) {
        if (allow_boundary) return 0.0;
        throw DomainError("binary entropy evaluated at the boundary");
    }
    if (!(x > 0.0 && x < 1.0)) throw DomainError("binary entropy needs x in (0,1)");
    return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double recovery_threshold(ThresholdKind kind, const RegimeSpec& regime) {
    regime.validate();
    const double p = static_cast<double>(regime.p);
    const double s = static_cast<double>(regime.s);
    switch (kind) {
        case ThresholdKind::NStar:
            if (regime.kind == RegimeSpec::Kind::Linear) {
                return 2.0 * binary_entropy(*regime.alpha) * p;
            }
            return 2.0 * s * std::log(p / s);
        case ThresholdKind::NInf:
            if (regime.s < 2) throw DomainError("n_INF needs s >= 2 (ln s > 0)");
            return 2.0 * s * std::log(p / s) / std::log(s);
        case ThresholdKind::NAlg:
            if (regime.s >= regime.p) throw DomainError("n_ALG needs s < p");
            return 2.0 * s * std::log(p - s) + s + 1.0;
    }
    throw DomainError("unknown threshold kind");
}

namespace {

void check_delta_epsilon(double delta, double epsilon) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("epsilon must be finite and nonnegative");
    }
}

void check_variances(double sigma1_sq, double sigma2_sq) {
    if (!(sigma1_sq > 0.0) || !std::isfinite(sigma2_sq)) {
        throw DomainError("variances must be positive and finite");
    }
    if (sigma1_sq > sigma2_sq) throw DomainError("sigma1^2 must not exceed sigma2^2");
}

}  // namespace

double agnostic_term(double sigma_sq, double sigma_max_sq, std::size_t s, double delta) {
    // sigma^2 <= sigma_max^2 guarantees a positive numerator.
    assert(2.0 * sigma_max_sq - sigma_sq > 0.0);
    const double ds = delta * static_cast<double>(s);
    return std::log1p(ds * (2.0 * sigma_max_sq - sigma_sq) / (2.0 * sigma_max_sq * sigma_max_sq));
}

double informed_term(double sigma_sq, std::size_t s, double delta) {
    return std::log1p(delta * static_cast<double>(s) / (2.0 * sigma_sq));
}

SufficiencyCheck check_sufficient(const SufficiencyInputs& in) {
    // Zero epsilon is accepted for frontier arithmetic; the theorems need > 0.
    check_delta_epsilon(in.delta, in.epsilon);
    if (in.s == 0) throw DomainError("s must be positive");

    SufficiencyCheck out;
    out.setting = in.setting;
    out.delta = in.delta;
    out.epsilon = in.epsilon;
    out.n_star = recovery_threshold(ThresholdKind::NStar, in.regime);

    if (in.setting == Setting::GeneralSigma) {
        if (in.general_sigmas_sq.empty()) {
            throw DomainError("GeneralSigma needs the per-sample variance sequence");
        }
        if (in.general_form == Setting::GeneralSigma) {
            throw DomainError("GeneralSigma per-sample form must be agnostic or informed");
        }
        double sigma_max_sq = 0.0;
        for (double v : in.general_sigmas_sq) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw DomainError("per-sample variances must be positive and finite");
            }
            sigma_max_sq = std::max(sigma_max_sq, v);
        }
        out.per_sample_terms.reserve(in.general_sigmas_sq.size());
        for (double v : in.general_sigmas_sq) {
            const double t = in.general_form == Setting::Agnostic
                                 ? agnostic_term(v, sigma_max_sq, in.s, in.delta)
                                 : informed_term(v, in.s, in.delta);
            out.per_sample_terms.push_back(t);
            out.lhs += t;
        }
    } else {
        check_variances(in.sigma1_sq, in.sigma2_sq);
        out.coeff1 = in.setting == Setting::Agnostic
                         ? agnostic_term(in.sigma1_sq, in.sigma2_sq, in.s, in.delta)
                         : informed_term(in.sigma1_sq, in.s, in.delta);
        out.coeff2 = in.setting == Setting::Agnostic
                         ? agnostic_term(in.sigma2_sq, in.sigma2_sq, in.s, in.delta)
                         : informed_term(in.sigma2_sq, in.s, in.delta);
        out.lhs = static_cast<double>(in.n1) * out.coeff1 + static_cast<double>(in.n2) * out.coeff2;
    }
    out.holds = out.lhs >= out.target();
    return out;
}

double price_of_quality(Setting setting, double sigma1_sq, double sigma2_sq, std::size_t s,
                        double delta) {
    check_variances(sigma1_sq, sigma2_sq);
    check_delta_epsilon(delta, 0.0);
    if (s == 0) throw DomainError("s must be positive");
    switch (setting) {
        case Setting::Agnostic:
            return agnostic_term(sigma1_sq, sigma2_sq, s, delta) /
                   agnostic_term(sigma2_sq, sigma2_sq, s, delta);
        case Setting::Informed:
            return informed_term(sigma1_sq, s, delta) / informed_term(sigma2_sq, s, delta);
        case Setting::GeneralSigma: break;
    }
    throw DomainError("price of quality is defined for the agnostic and informed settings");
}

AsymptoticPoq poq_asymptotic(Setting setting, AsymptoticRegime regime, double sigma1_sq,
                             double sigma2_sq, std::size_t s) {
    check_variances(sigma1_sq, sigma2_sq);
    const double sd = static_cast<double>(s);
    if (setting == Setting::Agnostic) {
        switch (regime) {
            case AsymptoticRegime::HighSnr2:
            case AsymptoticRegime::HighSnr: return {1.0, false};
            case AsymptoticRegime::LowSnr2:
            case AsymptoticRegime::LowSnr: return {2.0 - sigma1_sq / sigma2_sq, false};
            case AsymptoticRegime::LowSnr2HighSnr1:
                throw DomainError("no agnostic asymptote is available for low SNR2 & high SNR1");
        }
    }
    if (setting == Setting::Informed) {
        switch (regime) {
            case AsymptoticRegime::LowSnr: return {sigma2_sq / sigma1_sq, false};
            case AsymptoticRegime::HighSnr2:
            case AsymptoticRegime::HighSnr:
                if (!(sigma2_sq < sd)) {
                    throw DomainError("informed high-SNR asymptote needs sigma2^2 < s");
                }
                return {std::log(sd / sigma1_sq) / std::log(sd / sigma2_sq), false};
            case AsymptoticRegime::LowSnr2HighSnr1:
                return {std::log(sd / sigma1_sq) / (sd / sigma2_sq), true};
            case AsymptoticRegime::LowSnr2:
                throw DomainError("informed low-SNR2 asymptote needs the SNR1 regime too");
        }
    }
    throw DomainError("asymptotic price of quality needs the agnostic or informed setting");
}

std::vector<FrontierPoint> sample_frontier(const SufficiencyInputs& tmpl,
                                           std::span<const std::size_t> n1_grid) {
    if (tmpl.setting == Setting::GeneralSigma) {
        throw DomainError("frontiers are defined for the two-block settings");
    }
    SufficiencyInputs probe = tmpl;
    probe.n1 = 0;
    probe.n2 = 0;
    const SufficiencyCheck base = check_sufficient(probe);
    if (!(base.coeff2 > 0.0)) throw DomainError("frontier needs alpha2 > 0");

    const double target = base.target();
    const auto holds_at = [&](std::size_t n1, std::size_t n2) {
        return static_cast<double>(n1) * base.coeff1 + static_cast<double>(n2) * base.coeff2 >=
               target;
    };

    std::vector<FrontierPoint> out;
    out.reserve(n1_grid.size());
    for (std::size_t n1 : n1_grid) {
        FrontierPoint pt;
        pt.n1 = n1;
        const double need = (target - static_cast<double>(n1) * base.coeff1) / base.coeff2;
        pt.n2_continuous = std::max(0.0, need);
        auto n2 = static_cast<std::size_t>(std::ceil(pt.n2_continuous));
        // Snap against rounding in the division.
        while (!holds_at(n1, n2)) ++n2;
        while (n2 > 0 && holds_at(n1, n2 - 1)) --n2;
        pt.n2 = n2;
        out.push_back(pt);
    }
    return out;
}

}  // namespace mqsr::planner
