#pragma once

#include <cstdint>

namespace mqsr::stats {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    double half_width() const noexcept { return 0.5 * (upper - lower); }
};

/// Wilson score interval at 95% (z = 1.959963984540054).
Interval wilson95(std::uint64_t successes, std::uint64_t trials);

/// Exact (Clopper-Pearson) 95% interval.
Interval clopper_pearson95(std::uint64_t successes, std::uint64_t trials);

}  // namespace mqsr::stats
