#include "mqsr/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "mqsr/errors.hpp"
#include "mqsr/parallel.hpp"
#include "mqsr/rng.hpp"
#include "mqsr/stats.hpp"

namespace mqsr::chernoff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double block_sigma_sq(const ChernoffQuery& q, Block block) noexcept {
    return block == Block::HQ ? q.sigma1_sq : q.sigma2_sq;
}

std::size_t block_count(const ChernoffQuery& q, Block block) noexcept {
    return block == Block::HQ ? q.n1 : q.n2;
}

/// Exponent argument u with M = (1 - 2u)^{-1/2}.
double mgf_argument(const ChernoffQuery& q, Block block, double theta) noexcept {
    const double m = static_cast<double>(q.m);
    const double var = block_sigma_sq(q, block);
    if (q.setting == Setting::Agnostic) return m * (-theta + 2.0 * theta * theta * var);
    return m * (-theta + 2.0 * theta * theta) / var;
}

/// Largest theta with finite agnostic MGF for variance `var`: root of
/// 4 m var theta^2 - 2 m theta - 1 = 0.
double agnostic_domain_end(double m, double var) {
    return (2.0 * m + std::sqrt(4.0 * m * m + 16.0 * m * var)) / (8.0 * m * var);
}

double polish(double c3, double c2, double c1, double c0, double x) {
    for (int it = 0; it < 2; ++it) {
        const double f = ((c3 * x + c2) * x + c1) * x + c0;
        const double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
        if (df == 0.0 || !std::isfinite(df)) break;
        const double step = f / df;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

}  // namespace

void ChernoffQuery::validate() const {
    if (m == 0) throw DomainError("Chernoff query needs m >= 1");
    if (!(sigma1_sq > 0.0) || !std::isfinite(sigma2_sq)) {
        throw DomainError("Chernoff query needs positive finite variances");
    }
    if (sigma1_sq > sigma2_sq) throw DomainError("sigma1^2 must not exceed sigma2^2");
    if (theta && (!(*theta >= 0.0) || !std::isfinite(*theta))) {
        throw DomainError("theta must be finite and nonnegative");
    }
}

std::size_t overlap_deficit(double delta, std::size_t s) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
    if (s == 0) throw DomainError("s must be positive");
    auto m = static_cast<std::size_t>(std::ceil(2.0 * delta * static_cast<double>(s) - 1e-12));
    if (m % 2 == 1) ++m;
    return std::max<std::size_t>(m, 2);
}

double log_block_mgf(const ChernoffQuery& query, Block block, double theta) {
    query.validate();
    if (!(theta >= 0.0)) throw DomainError("theta must be nonnegative");
    const double u = mgf_argument(query, block, theta);
    if (!(u < 0.5)) return kInf;
    return -0.5 * std::log1p(-2.0 * u);
}

double block_mgf(const ChernoffQuery& query, Block block) {
    if (!query.theta) throw DomainError("block_mgf needs theta");
    return std::exp(log_block_mgf(query, block, *query.theta));
}

double log_bound_at(const ChernoffQuery& query, double theta) {
    double total = 0.0;
    for (Block b : {Block::HQ, Block::LQ}) {
        const std::size_t count = block_count(query, b);
        if (count == 0) continue;
        total += static_cast<double>(count) * log_block_mgf(query, b, theta);
    }
    return total;
}

double theta_max(const ChernoffQuery& query) {
    query.validate();
    const double m = static_cast<double>(query.m);
    double end = kInf;
    for (Block b : {Block::HQ, Block::LQ}) {
        if (block_count(query, b) == 0) continue;
        const double var = block_sigma_sq(query, b);
        const double e = query.setting == Setting::Agnostic
                             ? agnostic_domain_end(m, var)
                             : (2.0 * m + std::sqrt(4.0 * m * m + 16.0 * m * var)) / (8.0 * m);
        end = std::min(end, e);
    }
    return end;
}

double relaxed_theta(const ChernoffQuery& query) {
    query.validate();
    return query.setting == Setting::Agnostic ? 1.0 / (4.0 * query.sigma2_sq) : 0.25;
}

double log_chernoff_bound(const ChernoffQuery& query) {
    query.validate();
    const double m = static_cast<double>(query.m);
    const double a1 = query.sigma1_sq;
    const double a2 = query.sigma2_sq;
    double t1 = 0.0;
    double t2 = 0.0;
    if (query.setting == Setting::Agnostic) {
        t1 = std::log1p(m * (2.0 * a2 - a1) / (4.0 * a2 * a2));
        t2 = std::log1p(m / (4.0 * a2));
    } else {
        t1 = std::log1p(m / (4.0 * a1));
        t2 = std::log1p(m / (4.0 * a2));
    }
    return -0.5 * (static_cast<double>(query.n1) * t1 + static_cast<double>(query.n2) * t2);
}

double chernoff_bound(const ChernoffQuery& query) { return std::exp(log_chernoff_bound(query)); }

std::vector<double> cubic_real_roots(double c3, double c2, double c1, double c0) {
    std::vector<double> roots;
    const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
    if (std::abs(c3) <= 1e-14 * scale) {
        if (std::abs(c2) <= 1e-14 * std::max(std::abs(c1), std::abs(c0))) {
            if (c1 != 0.0) roots.push_back(-c0 / c1);
            return roots;
        }
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc < 0.0) return roots;
        // Stable quadratic roots.
        const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
        roots.push_back(q / c2);
        if (q != 0.0) roots.push_back(c0 / q);
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    const double a = c2 / c3;
    const double b = c1 / c3;
    const double c = c0 / c3;
    // x = t - a/3:  t^3 + p t + q = 0
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    if (disc > 0.0) {
        const double r = std::sqrt(disc);
        roots.push_back(std::cbrt(-q / 2.0 + r) + std::cbrt(-q / 2.0 - r) + shift);
    } else if (p == 0.0) {
        roots.push_back(shift);
    } else {
        const double rad = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * rad), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back(rad * std::cos(phi - 2.0 * M_PI * k / 3.0) + shift);
        }
    }
    for (double& x : roots) x = polish(c3, c2, c1, c0, x);
    std::sort(roots.begin(), roots.end());
    return roots;
}

ThetaOptimum optimal_theta_agnostic(const ChernoffQuery& query) {
    query.validate();
    if (query.setting != Setting::Agnostic) {
        throw DomainError("optimal_theta_agnostic needs an agnostic query");
    }
    ThetaOptimum out;
    out.theta = relaxed_theta(query);
    out.log_bound = log_bound_at(query, out.theta);
    if (query.n1 + query.n2 == 0) return out;

    const double m = static_cast<double>(query.m);
    const double a1 = query.sigma1_sq;
    const double a2 = query.sigma2_sq;
    const double n1 = static_cast<double>(query.n1);
    const double n2 = static_cast<double>(query.n2);
    // n1 (4 a1 t - 1)(1 - 2m(-t + 2 t^2 a2)) + n2 (4 a2 t - 1)(1 - 2m(-t + 2 t^2 a1))
    const double c3 = -16.0 * a1 * a2 * m * (n1 + n2);
    const double c2 = n1 * (8.0 * a1 * m + 4.0 * a2 * m) + n2 * (8.0 * a2 * m + 4.0 * a1 * m);
    const double c1 = n1 * (4.0 * a1 - 2.0 * m) + n2 * (4.0 * a2 - 2.0 * m);
    const double c0 = -(n1 + n2);
    out.roots = cubic_real_roots(c3, c2, c1, c0);

    const double end = theta_max(query);
    for (double r : out.roots) {
        if (!(r > 0.0 && r < end)) continue;
        const double value = log_bound_at(query, r);
        if (value < out.log_bound) {
            out.log_bound = value;
            out.theta = r;
            out.from_cubic = true;
        }
    }
    return out;
}

MisrankEstimate empirical_misrank(const SparseSignal& truth, const NoiseProfile& noise,
                                  const std::vector<std::size_t>& candidate, Setting setting,
                                  std::uint64_t trials, std::uint64_t seed, std::size_t threads) {
    noise.validate();
    if (!truth.is_binary()) throw DomainError("misranking needs a binary signal");
    if (trials == 0) throw DomainError("misranking needs trials >= 1");
    if (setting == Setting::Informed && !(noise.sigma1_sq > 0.0)) {
        throw DomainError("informed misranking needs positive variances");
    }
    std::vector<std::size_t> cand(candidate);
    std::sort(cand.begin(), cand.end());
    if (std::adjacent_find(cand.begin(), cand.end()) != cand.end() ||
        cand.size() != truth.sparsity() ||
        (!cand.empty() && cand.back() >= truth.dimension())) {
        throw DomainError("candidate must be a set of s distinct in-range indices");
    }

    // Only the symmetric difference matters: d_i = sum_{S* \ S} x_ij - sum_{S \ S*} x_ij.
    std::vector<double> coeff;
    {
        std::vector<std::size_t> only_truth;
        std::vector<std::size_t> only_cand;
        std::set_difference(truth.support().begin(), truth.support().end(), cand.begin(),
                            cand.end(), std::back_inserter(only_truth));
        std::set_difference(cand.begin(), cand.end(), truth.support().begin(),
                            truth.support().end(), std::back_inserter(only_cand));
        coeff.assign(only_truth.size(), 1.0);
        coeff.insert(coeff.end(), only_cand.size(), -1.0);
    }
    const std::size_t m = coeff.size();
    const std::size_t n = noise.n();
    const double sd1 = std::sqrt(noise.sigma1_sq);
    const double sd2 = std::sqrt(noise.sigma2_sq);

    constexpr std::uint64_t kChunk = 1024;
    const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> hits(chunks, 0);
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        const std::uint64_t first = chunk * kChunk;
        const std::uint64_t last = std::min(trials, first + kChunk);
        std::uint64_t local = 0;
        for (std::uint64_t t = first; t < last; ++t) {
            const std::uint64_t trial_seed = rng::derive_seed(seed, 0, t);
            const rng::CounterStream xs(rng::derive_key(trial_seed, 1));
            const rng::CounterStream zs(rng::derive_key(trial_seed, 2));
            double delta = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double d = 0.0;
                for (std::size_t k = 0; k < m; ++k) d += coeff[k] * xs.normal(i * m + k);
                const bool high = i < noise.n1;
                const double z = (high ? sd1 : sd2) * zs.normal(i);
                double term = d * d + 2.0 * d * z;
                if (setting == Setting::Informed) term /= high ? noise.sigma1_sq : noise.sigma2_sq;
                delta += term;
            }
            if (delta <= 0.0) ++local;
        }
        hits[chunk] = local;
    });

    MisrankEstimate out;
    out.trials = trials;
    for (std::uint64_t h : hits) out.hits += h;
    out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
    out.ci95 = stats::clopper_pearson95(out.hits, trials).half_width();
    return out;
}

}  // namespace mqsr::chernoff
