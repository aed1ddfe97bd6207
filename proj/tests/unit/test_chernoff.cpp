#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mqsr/chernoff.hpp"
#include "mqsr/errors.hpp"
#include "mqsr/planner.hpp"
#include "mqsr/rng.hpp"

using namespace mqsr;
using namespace mqsr::chernoff;

namespace {

ChernoffQuery query(Setting setting, std::size_t n1, std::size_t n2, double a1, double a2,
                    std::size_t m) {
    ChernoffQuery q;
    q.setting = setting;
    q.n1 = n1;
    q.n2 = n2;
    q.sigma1_sq = a1;
    q.sigma2_sq = a2;
    q.m = m;
    return q;
}

// Direct evaluation of the log-bound from the MGF display, independent of the library.
double direct_log_bound(const ChernoffQuery& q, double t) {
    const double m = static_cast<double>(q.m);
    double total = 0.0;
    const double vars[2] = {q.sigma1_sq, q.sigma2_sq};
    const double counts[2] = {static_cast<double>(q.n1), static_cast<double>(q.n2)};
    for (int b = 0; b < 2; ++b) {
        if (counts[b] == 0) continue;
        const double u = q.setting == Setting::Agnostic ? m * (-t + 2 * t * t * vars[b])
                                                        : m * (-t + 2 * t * t) / vars[b];
        if (1.0 - 2.0 * u <= 0.0) return std::numeric_limits<double>::infinity();
        total += -0.5 * counts[b] * std::log(1.0 - 2.0 * u);
    }
    return total;
}

}  // namespace

TEST(Chernoff, BlockMgfAtZeroIsOne) {
    for (auto setting : {Setting::Agnostic, Setting::Informed}) {
        auto q = query(setting, 3, 4, 0.5, 2.0, 6);
        q.theta = 0.0;
        EXPECT_EQ(block_mgf(q, Block::HQ), 1.0);
        EXPECT_EQ(block_mgf(q, Block::LQ), 1.0);
    }
}

TEST(Chernoff, BlockMgfAtRelaxedTheta) {
    auto q = query(Setting::Agnostic, 1, 1, 1.0, 4.0, 8);
    q.theta = 1.0 / 16.0;
    EXPECT_NEAR(block_mgf(q, Block::LQ), std::pow(1.0 + 8.0 / 16.0, -0.5), 1e-15);
    EXPECT_NEAR(block_mgf(q, Block::HQ), std::pow(1.875, -0.5), 1e-15);
}

TEST(Chernoff, BlockMgfOutsideDomainIsInfinite) {
    auto q = query(Setting::Agnostic, 1, 1, 1.0, 4.0, 8);
    q.theta = 10.0;
    EXPECT_TRUE(std::isinf(block_mgf(q, Block::LQ)));
    EXPECT_TRUE(std::isinf(block_mgf(q, Block::HQ)));
    // Exactly at the domain end the argument is 1/2.
    const double end = theta_max(query(Setting::Agnostic, 0, 1, 1.0, 4.0, 8));
    q.theta = end * (1 + 1e-12);
    EXPECT_TRUE(std::isinf(block_mgf(q, Block::LQ)));
    q.theta = end * (1 - 1e-6);
    EXPECT_TRUE(std::isfinite(block_mgf(q, Block::LQ)));
}

TEST(Chernoff, HqDomainContainsLqDomain) {
    rng::Sequence seq(3);
    for (int k = 0; k < 500; ++k) {
        const double a2 = 0.1 + 8 * seq.uniform();
        const double a1 = a2 * seq.uniform() + 1e-3;
        const auto m = 1 + seq.below(30);
        const double hq = theta_max(query(Setting::Agnostic, 1, 0, std::min(a1, a2), a2, m));
        const double lq = theta_max(query(Setting::Agnostic, 0, 1, std::min(a1, a2), a2, m));
        EXPECT_GE(hq, lq);
    }
}

TEST(Chernoff, BoundExamples) {
    const auto q = query(Setting::Agnostic, 10, 10, 1.0, 4.0, overlap_deficit(0.5, 8));
    EXPECT_EQ(q.m, 8u);
    EXPECT_NEAR(chernoff_bound(q), std::pow(1.875, -5) * std::pow(1.5, -5), 1e-15);
    EXPECT_NEAR(chernoff_bound(q), 5.683e-3, 1e-6);
    EXPECT_NEAR(log_chernoff_bound(q), direct_log_bound(q, 1.0 / 16.0), 1e-12);
    EXPECT_EQ(chernoff_bound(query(Setting::Agnostic, 0, 0, 1.0, 4.0, 8)), 1.0);
    for (double a : {0.3, 1.0, 7.0}) {
        EXPECT_NEAR(chernoff_bound(query(Setting::Agnostic, 4, 9, a, a, 6)),
                    chernoff_bound(query(Setting::Informed, 4, 9, a, a, 6)), 1e-15);
    }
    const auto inf = query(Setting::Informed, 10, 10, 1.0, 4.0, 8);
    EXPECT_NEAR(chernoff_bound(inf), std::pow(3.0, -5) * std::pow(1.5, -5), 1e-15);
    EXPECT_NEAR(log_chernoff_bound(inf), direct_log_bound(inf, 0.25), 1e-12);
}

TEST(Chernoff, AgreesWithPlannerCoefficients) {
    // The agnostic bound is exp(-(n1 alpha1 + n2 alpha2)/2) with delta s = m/2.
    const auto q = query(Setting::Agnostic, 7, 13, 0.6, 2.2, 6);
    const double a1 = planner::agnostic_term(0.6, 2.2, 6, 0.5);
    const double a2 = planner::agnostic_term(2.2, 2.2, 6, 0.5);
    EXPECT_NEAR(log_chernoff_bound(q), -0.5 * (7 * a1 + 13 * a2), 1e-12);
}

TEST(Chernoff, InformedExactOptimumAtQuarter) {
    const auto q = query(Setting::Informed, 6, 9, 0.7, 3.0, 10);
    const double best = direct_log_bound(q, 0.25);
    for (double t = 0.01; t < theta_max(q); t += 0.005) EXPECT_GE(direct_log_bound(q, t), best - 1e-12);
}

TEST(Chernoff, InformedDominanceAndMonotonicity) {
    rng::Sequence seq(8);
    for (int k = 0; k < 2000; ++k) {
        const double a2 = 0.1 + 10 * seq.uniform();
        const double a1 = a2 * (0.01 + 0.99 * seq.uniform());
        const std::size_t n1 = seq.below(30), n2 = seq.below(30), m = 1 + seq.below(30);
        const auto ag = query(Setting::Agnostic, n1, n2, a1, a2, m);
        const auto in = query(Setting::Informed, n1, n2, a1, a2, m);
        EXPECT_LE(chernoff_bound(in), chernoff_bound(ag) * (1 + 1e-12));
        for (const auto& base : {ag, in}) {
            auto more = base;
            ++more.n1;
            EXPECT_LE(chernoff_bound(more), chernoff_bound(base));
            more = base;
            ++more.n2;
            EXPECT_LE(chernoff_bound(more), chernoff_bound(base));
            more = base;
            ++more.m;
            EXPECT_LE(chernoff_bound(more), chernoff_bound(base));
        }
    }
}

TEST(Chernoff, CubicRootsSolveThePolynomial) {
    rng::Sequence seq(10);
    for (int k = 0; k < 500; ++k) {
        const double r1 = 4 * seq.uniform() - 2, r2 = 4 * seq.uniform() - 2, r3 = 4 * seq.uniform() - 2;
        const double c = 0.5 + seq.uniform();
        // c (x - r1)(x - r2)(x - r3)
        const double c2 = -c * (r1 + r2 + r3);
        const double c1 = c * (r1 * r2 + r1 * r3 + r2 * r3);
        const double c0 = -c * r1 * r2 * r3;
        const auto roots = cubic_real_roots(c, c2, c1, c0);
        ASSERT_FALSE(roots.empty());
        for (double x : roots) {
            const double scale = c * (std::abs(x) + 2) * (std::abs(x) + 2) * (std::abs(x) + 2);
            EXPECT_LT(std::abs(((c * x + c2) * x + c1) * x + c0), 1e-9 * scale);
        }
        for (double r : {r1, r2, r3}) {
            double nearest = 1e300;
            for (double x : roots) nearest = std::min(nearest, std::abs(x - r));
            // Close double roots lose about half the digits.
            EXPECT_LT(nearest, 1e-4);
        }
    }
    EXPECT_EQ(cubic_real_roots(0, 1, -3, 2), (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(cubic_real_roots(0, 0, 2, -1), (std::vector<double>{0.5}));
    EXPECT_EQ(cubic_real_roots(1, 0, 1, 0).size(), 1u);
}

TEST(Chernoff, OptimalThetaHomogeneousIsQuarterOverSigma) {
    for (double a : {0.25, 1.0, 3.0, 8.0}) {
        for (std::size_t m : {2u, 5u, 12u}) {
            const auto opt = optimal_theta_agnostic(query(Setting::Agnostic, 6, 9, a, a, m));
            EXPECT_NEAR(opt.theta, 1.0 / (4.0 * a), 1e-9);
            EXPECT_NEAR(opt.log_bound, log_chernoff_bound(query(Setting::Agnostic, 6, 9, a, a, m)), 1e-12);
        }
    }
}

TEST(Chernoff, OptimalThetaExampleAgainstGridScan) {
    const auto q = query(Setting::Agnostic, 10, 10, 1.0, 4.0, 8);
    const auto opt = optimal_theta_agnostic(q);
    EXPECT_TRUE(opt.from_cubic);
    EXPECT_LT(opt.log_bound, log_chernoff_bound(q));
    const double end = theta_max(q);
    const int grid = 100000;
    double best = 1e300, arg = 0.0;
    for (int k = 1; k < grid; ++k) {
        const double t = end * k / grid;
        const double v = direct_log_bound(q, t);
        if (v < best) { best = v; arg = t; }
    }
    EXPECT_LE(opt.log_bound, best + 1e-12);
    EXPECT_NEAR(opt.theta, arg, end / grid);
}

TEST(Chernoff, OptimalThetaNeverWorseThanRelaxed) {
    rng::Sequence seq(21);
    for (int k = 0; k < 1000; ++k) {
        const double a2 = 0.25 + 64 * seq.uniform();
        const double a1 = a2 * (0.01 + 0.99 * seq.uniform());
        const auto q = query(Setting::Agnostic, seq.below(25), seq.below(25), a1, a2, 1 + seq.below(25));
        const auto opt = optimal_theta_agnostic(q);
        EXPECT_LE(opt.log_bound, log_chernoff_bound(q) + 1e-12);
        EXPECT_NEAR(opt.log_bound, direct_log_bound(q, opt.theta), 1e-10);
    }
}

TEST(Chernoff, OverlapDeficit) {
    EXPECT_EQ(overlap_deficit(0.5, 8), 8u);
    EXPECT_EQ(overlap_deficit(0.25, 4), 2u);
    EXPECT_EQ(overlap_deficit(0.3, 4), 4u);  // 2.4 -> 3 -> even 4
    EXPECT_EQ(overlap_deficit(0.01, 4), 2u);
    EXPECT_THROW(overlap_deficit(0.0, 4), DomainError);
}

TEST(Misrank, TruthAlwaysTiesAndNoiselessNeverMisranks) {
    const auto truth = SparseSignal::binary(10, {0, 1, 2});
    const auto same = empirical_misrank(truth, {5, 5, 1.0, 2.0}, {0, 1, 2}, Setting::Agnostic, 500, 1);
    EXPECT_EQ(same.estimate, 1.0);
    const auto noiseless = empirical_misrank(truth, {5, 5, 0.0, 0.0}, {0, 1, 7}, Setting::Agnostic, 500, 1);
    EXPECT_EQ(noiseless.estimate, 0.0);
    EXPECT_GT(noiseless.ci95, 0.0);
    EXPECT_THROW(empirical_misrank(truth, {5, 5, 1.0, 2.0}, {0, 1}, Setting::Agnostic, 10, 1), DomainError);
}

TEST(Misrank, DeterministicAndThreadIndependent) {
    const auto truth = SparseSignal::binary(12, {0, 1, 2, 3});
    const std::vector<std::size_t> cand{0, 1, 8, 9};
    const auto a = empirical_misrank(truth, {3, 3, 1.0, 4.0}, cand, Setting::Agnostic, 5000, 9, 1);
    const auto b = empirical_misrank(truth, {3, 3, 1.0, 4.0}, cand, Setting::Agnostic, 5000, 9, 3);
    EXPECT_EQ(a.hits, b.hits);
    EXPECT_EQ(a.estimate, b.estimate);
}

TEST(Misrank, ExampleSitsBelowTheBound) {
    const auto truth = SparseSignal::binary(12, {0, 1, 2, 3, 4, 5, 6, 7});
    const std::vector<std::size_t> cand{0, 1, 2, 3, 8, 9, 10, 11};  // m = 8
    const auto est = empirical_misrank(truth, {10, 10, 1.0, 4.0}, cand, Setting::Agnostic, 100000, 2024);
    EXPECT_LE(est.estimate, 5.683e-3 + 3 * est.ci95);
    EXPECT_GT(est.hits, 0u);
}

TEST(Misrank, SingleRowMatchesOrthantProbability) {
    // One row, one column swapped: d = x_in - x_out ~ N(0, 2) and Delta = d (d + 2Z).
    // Delta <= 0 iff d and W = d + 2Z have opposite signs:
    // P = 1/2 - asin(rho)/pi with rho = corr(d, W) = sqrt(2 / (2 + 4 s2)).
    const double s2 = 1.5;
    const double rho = std::sqrt(2.0 / (2.0 + 4.0 * s2));
    const double p = 0.5 - std::asin(rho) / M_PI;
    const auto truth = SparseSignal::binary(2, {0});
    const auto est = empirical_misrank(truth, {0, 1, s2, s2}, {1}, Setting::Agnostic, 200000, 5);
    EXPECT_NEAR(est.estimate, p, 4 * std::sqrt(p * (1 - p) / 200000));
}
