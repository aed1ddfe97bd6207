#include "mqsr/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mqsr/errors.hpp"
#include "mqsr/parallel.hpp"
#include "mqsr/rng.hpp"

namespace mqsr::decoders {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

namespace {

constexpr std::uint64_t kChunk = 4096;

/// Row weights: empty for the agnostic objective.
std::vector<double> row_weights(const MixedDataset& ds, Objective objective) {
    if (objective == Objective::Agnostic) return {};
    if (!(ds.noise.sigma1_sq > 0.0) || !(ds.noise.sigma2_sq > 0.0)) {
        throw DomainError("informed objective needs positive block variances");
    }
    std::vector<double> w(ds.n());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / ds.noise.variance_of_row(i);
    return w;
}

/// Shared loss kernel; `support` must be sorted so the column order is canonical.
double loss_kernel(const MixedDataset& ds, std::span<const double> weights,
                   std::span<const std::size_t> support, std::vector<double>& buf) {
    const std::size_t n = ds.n();
    buf.resize(n);
    const double* y = ds.observations.data();
    std::copy(y, y + n, buf.begin());
    for (std::size_t j : support) {
        const double* col = ds.design.col(static_cast<Eigen::Index>(j)).data();
        for (std::size_t i = 0; i < n; ++i) buf[i] -= col[i];
    }
    if (n <= kCompensatedSumRows) {
        double sum = 0.0;
        if (weights.empty()) {
            for (std::size_t i = 0; i < n; ++i) sum += buf[i] * buf[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) sum += weights[i] * buf[i] * buf[i];
        }
        return sum;
    }
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double term = (weights.empty() ? 1.0 : weights[i]) * buf[i] * buf[i];
        const double t = sum + term;
        carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + carry;
}

bool better(double loss, const std::vector<std::size_t>& support, double best_loss,
            const std::vector<std::size_t>& best_support) {
    if (loss != best_loss) return loss < best_loss;
    return std::lexicographical_compare(support.begin(), support.end(), best_support.begin(),
                                        best_support.end());
}

void check_support(const MixedDataset& ds, std::span<const std::size_t> support) {
    for (std::size_t j : support) {
        if (j >= ds.p()) {
            throw DomainError("support index " + std::to_string(j) + " out of range [0, " +
                              std::to_string(ds.p()) + ")");
        }
    }
}

/// Advances a colex-ordered combination; returns false after the last one.
bool next_colex(std::vector<std::size_t>& c, std::size_t p) {
    const std::size_t s = c.size();
    for (std::size_t i = 0; i < s; ++i) {
        const std::size_t limit = i + 1 < s ? c[i + 1] : p;
        if (c[i] + 1 < limit) {
            ++c[i];
            for (std::size_t k = 0; k < i; ++k) c[k] = k;
            return true;
        }
    }
    return false;
}

}  // namespace

double support_loss(const MixedDataset& dataset, std::span<const std::size_t> support,
                    Objective objective) {
    check_support(dataset, support);
    std::vector<std::size_t> sorted(support.begin(), support.end());
    std::sort(sorted.begin(), sorted.end());
    const auto weights = row_weights(dataset, objective);
    std::vector<double> buf;
    return loss_kernel(dataset, weights, sorted, buf);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max()) {
            return std::numeric_limits<std::uint64_t>::max();
        }
    }
    return static_cast<std::uint64_t>(acc);
}

std::vector<std::size_t> colex_unrank(std::uint64_t rank, std::size_t s) {
    std::vector<std::size_t> c(s);
    for (std::size_t i = s; i-- > 0;) {
        // Largest v with C(v, i+1) <= rank.
        std::size_t v = i;
        while (binomial(v + 1, i + 1) <= rank) ++v;
        c[i] = v;
        rank -= binomial(v, i + 1);
    }
    return c;
}

DecodeResult decode_exhaustive(const MixedDataset& dataset, std::size_t s, Objective objective,
                               const ExhaustiveOptions& options) {
    const std::size_t p = dataset.p();
    if (s == 0 || s > p) throw DomainError("exhaustive decoding needs 1 <= s <= p");
    const std::uint64_t total = binomial(p, s);
    if (total > options.candidate_cap) {
        throw ResourceError("C(" + std::to_string(p) + ", " + std::to_string(s) +
                            ") candidates exceed the exhaustive cap of " +
                            std::to_string(options.candidate_cap) +
                            "; use decode_local_search instead");
    }
    const auto weights = row_weights(dataset, objective);

    const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<DecodeResult> partial(chunks);
    parallel_for(chunks, options.threads, [&](std::size_t chunk) {
        const std::uint64_t first = chunk * kChunk;
        const std::uint64_t last = std::min(total, first + kChunk);
        std::vector<std::size_t> c = colex_unrank(first, s);
        std::vector<double> buf;
        DecodeResult& best = partial[chunk];
        best.loss = std::numeric_limits<double>::infinity();
        for (std::uint64_t r = first; r < last; ++r) {
            const double loss = loss_kernel(dataset, weights, c, buf);
            if (best.support.empty() || better(loss, c, best.loss, best.support)) {
                best.loss = loss;
                best.support = c;
            }
            if (r + 1 < last) next_colex(c, p);
        }
        best.scanned = last - first;
    });

    DecodeResult out = std::move(partial.front());
    for (std::size_t k = 1; k < partial.size(); ++k) {
        out.scanned += partial[k].scanned;
        if (better(partial[k].loss, partial[k].support, out.loss, out.support)) {
            out.loss = partial[k].loss;
            out.support = std::move(partial[k].support);
        }
    }
    out.exhaustive = true;
    return out;
}

DecodeResult decode_local_search(const MixedDataset& dataset, std::size_t s, Objective objective,
                                 std::size_t restarts, std::uint64_t seed) {
    const std::size_t p = dataset.p();
    if (s == 0 || s > p) throw DomainError("local search needs 1 <= s <= p");
    if (restarts == 0) throw DomainError("local search needs restarts >= 1");
    const auto weights = row_weights(dataset, objective);

    DecodeResult out;
    out.loss = std::numeric_limits<double>::infinity();
    std::vector<double> buf;
    std::vector<char> in_support(p);
    std::vector<std::size_t> candidate;

    for (std::size_t restart = 0; restart < restarts; ++restart) {
        rng::Sequence seq(rng::derive_key(seed, restart + 1));
        std::vector<std::size_t> current = rng::random_subset(seq, p, s);
        double current_loss = loss_kernel(dataset, weights, current, buf);
        ++out.scanned;

        while (true) {
            std::fill(in_support.begin(), in_support.end(), 0);
            for (std::size_t j : current) in_support[j] = 1;

            double best_loss = current_loss;
            std::vector<std::size_t> best_support;
            for (std::size_t a = 0; a < s; ++a) {
                for (std::size_t b = 0; b < p; ++b) {
                    if (in_support[b]) continue;
                    candidate = current;
                    candidate[a] = b;
                    std::sort(candidate.begin(), candidate.end());
                    const double loss = loss_kernel(dataset, weights, candidate, buf);
                    ++out.scanned;
                    if (loss < current_loss &&
                        (best_support.empty() || better(loss, candidate, best_loss, best_support))) {
                        best_loss = loss;
                        best_support = candidate;
                    }
                }
            }
            if (best_support.empty()) break;
            current = std::move(best_support);
            current_loss = best_loss;
        }

        if (out.support.empty() || better(current_loss, current, out.loss, out.support)) {
            out.loss = current_loss;
            out.support = current;
        }
    }
    out.exhaustive = false;
    return out;
}

}  // namespace mqsr::decoders
