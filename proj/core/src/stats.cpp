#include "mqsr/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/beta.hpp>

#include "mqsr/errors.hpp"

namespace mqsr::stats {

namespace {
constexpr double kZ95 = 1.959963984540054;
constexpr double kAlpha = 0.05;
}  // namespace

Interval wilson95(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0 || successes > trials) throw DomainError("wilson interval needs 0 <= k <= n, n >= 1");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double spread = kZ95 * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - spread), std::min(1.0, centre + spread)};
}

Interval clopper_pearson95(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0 || successes > trials) {
        throw DomainError("Clopper-Pearson interval needs 0 <= k <= n, n >= 1");
    }
    const double k = static_cast<double>(successes);
    const double n = static_cast<double>(trials);
    Interval out{0.0, 1.0};
    if (successes > 0) {
        out.lower = boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1.0), kAlpha / 2.0);
    }
    if (successes < trials) {
        out.upper = boost::math::quantile(boost::math::beta_distribution<>(k + 1.0, n - k), 1.0 - kAlpha / 2.0);
    }
    return out;
}

}  // namespace mqsr::stats
