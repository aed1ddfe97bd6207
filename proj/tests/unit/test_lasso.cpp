#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mqsr/errors.hpp"
#include "mqsr/lasso.hpp"
#include "mqsr/planner.hpp"
#include "mqsr/rng.hpp"

using namespace mqsr;
using namespace mqsr::lasso;

namespace {

LassoConfig cfg(double lambda, double tol = 1e-10) {
    LassoConfig c;
    c.lambda = lambda;
    c.tol = tol;
    return c;
}

SparseSignal signed_signal(rng::Sequence& seq, std::size_t p, std::size_t s, double lo, double hi) {
    auto support = rng::random_subset(seq, p, s);
    std::vector<double> values(s);
    for (double& v : values) v = (seq.below(2) ? 1.0 : -1.0) * (lo + (hi - lo) * seq.uniform());
    return SparseSignal::make(p, support, values);
}

}  // namespace

TEST(Lasso, ScalarSoftThreshold) {
    Eigen::MatrixXd x(1, 1);
    x << 1.0;
    Eigen::VectorXd y(1);
    y << 2.0;
    const auto sol = solve_lasso(x, y, cfg(0.5));
    EXPECT_TRUE(sol.converged);
    EXPECT_NEAR(sol.beta(0), 1.5, 1e-12);
    EXPECT_NEAR(sol.objective, 0.5 * 0.25 + 0.75, 1e-12);
}

TEST(Lasso, UnregularisedSquareSystemSolvesLeastSquares) {
    rng::CounterStream s(4);
    Eigen::MatrixXd x(5, 5);
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) x(i, j) = s.normal(i * 5 + j) + (i == j ? 3.0 : 0.0);
        y(i) = s.normal(100 + i);
    }
    const auto sol = solve_lasso(x, y, cfg(0.0, 1e-13));
    EXPECT_TRUE(sol.converged);
    const Eigen::VectorXd ls = x.colPivHouseholderQr().solve(y);
    EXPECT_LT((sol.beta - ls).norm(), 1e-9);
    EXPECT_LT((x.transpose() * (y - x * sol.beta)).lpNorm<Eigen::Infinity>() / 5.0, 1e-9);
}

TEST(Lasso, FullShrinkageAboveLambdaMax) {
    const auto ds = generate_dataset(SparseSignal::binary(20, {1, 2}), {15, 15, 0.5, 1.0}, 3);
    const double lmax = (ds.design.transpose() * ds.observations).lpNorm<Eigen::Infinity>() / ds.n();
    EXPECT_TRUE(solve_lasso(ds, cfg(lmax)).beta.isZero());
    EXPECT_TRUE(solve_lasso(ds, cfg(1.5 * lmax)).beta.isZero());
    EXPECT_FALSE(solve_lasso(ds, cfg(0.9 * lmax)).beta.isZero());
}

TEST(Lasso, RejectsBadInput) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 2);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(2);
    EXPECT_THROW(solve_lasso(x, y, cfg(-1.0)), DomainError);
    y(0) = std::nan("");
    EXPECT_THROW(solve_lasso(x, y, cfg(0.1)), DataError);
    EXPECT_THROW(solve_lasso(x, Eigen::VectorXd::Ones(3), cfg(0.1)), DomainError);
}

TEST(Lasso, ReportsNonConvergence) {
    const auto ds = generate_dataset(SparseSignal::binary(40, {1, 2}), {10, 10, 0.5, 1.0}, 3);
    LassoConfig c = cfg(1e-4, 1e-15);
    c.max_iter = 2;
    const auto sol = solve_lasso(ds, c);
    EXPECT_FALSE(sol.converged);
    EXPECT_LE(sol.iterations, 2u);
}

TEST(Lasso, ObjectiveMonotoneAndKktCertificate) {
    rng::Sequence seq(5);
    for (int k = 0; k < 25; ++k) {
        const std::size_t p = 10 + seq.below(60), s = 1 + seq.below(5);
        const auto sig = signed_signal(seq, p, s, 0.5, 2.0);
        const auto ds = generate_dataset(sig, {5 + seq.below(40), 5 + seq.below(40), 0.2, 1.0}, k);
        LassoConfig c = cfg(0.02 + 0.3 * seq.uniform(), 1e-9);
        c.record_objective = true;
        const auto sol = solve_lasso(ds, c);
        ASSERT_TRUE(sol.converged);
        for (std::size_t t = 1; t < sol.objective_trace.size(); ++t) {
            EXPECT_LE(sol.objective_trace[t], sol.objective_trace[t - 1] + 1e-12);
        }
        EXPECT_NEAR(sol.objective, lasso_objective(ds.design, ds.observations, sol.beta, c.lambda), 1e-12);
        const double n = static_cast<double>(ds.n());
        const Eigen::VectorXd grad = ds.design.transpose() * (ds.observations - ds.design * sol.beta) / n;
        // Coordinate tolerance tol translates to a gradient slack of at most
        // tol * ||x_j||^2 / n per coordinate; allow a generous multiple.
        for (Eigen::Index j = 0; j < grad.size(); ++j) {
            const double slack = 10.0 * c.tol * ds.design.col(j).squaredNorm() / n + 1e-12;
            if (sol.beta(j) == 0.0) {
                EXPECT_LE(std::abs(grad(j)), c.lambda + slack);
            } else {
                EXPECT_NEAR(grad(j), c.lambda * (sol.beta(j) > 0 ? 1.0 : -1.0), slack);
            }
        }
    }
}

TEST(Lasso, IgnoresRecordedNoiseProfile) {
    const auto ds = generate_dataset(SparseSignal::binary(20, {4}), {10, 10, 0.5, 1.0}, 3);
    auto other = ds;
    other.noise = {10, 10, 0.01, 9.0};
    const auto a = solve_lasso(ds, cfg(0.1));
    const auto b = solve_lasso(other, cfg(0.1));
    EXPECT_TRUE(a.beta == b.beta);
}

TEST(Lasso, LambdaSchedule) {
    EXPECT_NEAR(lambda_schedule(2.0, 152, 4, 1000, 1.0), std::pow(2.0 * std::log(148.0) / 5000.0, 0.25), 1e-15);
    EXPECT_NEAR(lambda_schedule(2.0, 152, 4, 1000, 1.0), 0.2115, 5e-4);
    EXPECT_NEAR(lambda_schedule(32.0, 152, 4, 1000, 1.0) / lambda_schedule(2.0, 152, 4, 1000, 1.0), 2.0, 1e-14);
    EXPECT_NEAR(lambda_schedule(1.0, 100, 1, 500, 1e8), std::pow(std::log(99.0) / 500.0, 0.25), 1e-12);
    EXPECT_THROW(lambda_schedule(1.0, 5, 4, 10, 1.0), DomainError);
    EXPECT_THROW(lambda_schedule(1.0, 5, 0, 10, 1.0), DomainError);
}

TEST(Lasso, NoiseScaling) {
    EXPECT_TRUE(noise_scaling_ok(0.0, 100, 5, 50, 1.0, 1e-6));
    // ratio exactly 1 for n = 9 ln(p - s) with s = 8, rho = 1, sigma^2 = 1.
    const double n = 9.0 * std::log(504.0);
    EXPECT_NEAR(noise_scaling_ratio(1.0, 512, 8, 1, 1.0) / n, 1.0, 1e-14);
    EXPECT_FALSE(noise_scaling_ok(1.0, 512, 8, 56, 1.0, 0.1));
    EXPECT_NEAR(noise_scaling_ratio(0.25, 512, 8, 220, 1.0), 0.0636, 1e-4);
    EXPECT_TRUE(noise_scaling_ok(0.25, 512, 8, 220, 1.0));
}

TEST(Lasso, SampleSizeVerdicts) {
    const double n_alg = planner::recovery_threshold(planner::ThresholdKind::NAlg,
                                                     planner::RegimeSpec::sublinear(512, 8));
    EXPECT_NEAR(n_alg, 16.0 * std::log(504.0) + 9.0, 1e-12);
    EXPECT_EQ(check_sample_size(109, 512, 8, 0.5), SampleSizeVerdict::Gap);
    EXPECT_EQ(check_sample_size(static_cast<std::size_t>(std::ceil(2 * n_alg)), 512, 8, 0.5),
              SampleSizeVerdict::AboveSufficiency);
    EXPECT_EQ(check_sample_size(static_cast<std::size_t>(std::floor(0.4 * n_alg)), 512, 8, 0.5),
              SampleSizeVerdict::BelowNecessity);
    EXPECT_THROW(check_sample_size(10, 512, 8, 0.0), DomainError);
}

TEST(Witness, OrthonormalZeroNoise) {
    // Columns scaled so (1/n) X_S^T X_S = I.
    const std::size_t n = 4, p = 3;
    MixedDataset ds;
    ds.design = Eigen::MatrixXd::Zero(n, p);
    ds.design(0, 0) = 2.0;
    ds.design(1, 1) = 2.0;
    ds.design(2, 2) = 1.0;
    ds.design(3, 2) = 1.0;
    const auto sig = SparseSignal::make(p, {0, 1}, {1.0, -1.0});
    ds.observations = ds.design * sig.dense();
    ds.noise = {4, 0, 0.0, 0.0};
    const double lambda = 0.3;
    const auto w = kkt_recovery_witness(ds, sig, lambda);
    EXPECT_NEAR(w.u(0), -lambda, 1e-14);
    EXPECT_NEAR(w.u(1), lambda, 1e-14);
    EXPECT_TRUE(w.condition1);
    EXPECT_NEAR(w.on_support_slack[0], 1.0 - lambda, 1e-14);
    // Column 2 is orthogonal to X_S: V = 0.
    EXPECT_NEAR(w.v(0), 0.0, 1e-14);
    EXPECT_TRUE(w.recovery);
}

TEST(Witness, LambdaZeroNoiselessRecovers) {
    const auto sig = SparseSignal::make(10, {2, 7}, {1.0, -2.0});
    const auto ds = generate_dataset(sig, {20, 0, 0.0, 0.0}, 4);
    const auto w = kkt_recovery_witness(ds, sig, 0.0);
    EXPECT_LT(w.u.lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_LT(w.v.lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_TRUE(w.recovery);
    EXPECT_EQ(w.recovery, w.condition1 && w.condition2);
}

TEST(Witness, DegenerateDesignsAreRejected) {
    auto ds = generate_dataset(SparseSignal::binary(6, {0, 1}), {10, 0, 0.1, 0.1}, 1);
    ds.design.col(1) = ds.design.col(0);
    EXPECT_THROW(kkt_recovery_witness(ds, SparseSignal::binary(6, {0, 1}), 0.1), DegenerateInstanceError);
    const auto small = generate_dataset(SparseSignal::binary(6, {0, 1}), {2, 0, 0.1, 0.1}, 1);
    EXPECT_THROW(kkt_recovery_witness(small, SparseSignal::binary(6, {0, 1}), 0.1), DegenerateInstanceError);
}

TEST(Witness, AgreesWithSolverOnRandomInstances) {
    rng::Sequence seq(99);
    int agree = 0, boundary = 0, total = 0;
    for (int k = 0; k < 150; ++k) {
        const std::size_t p = 8 + seq.below(33), s = 1 + seq.below(4);
        const std::size_t n = 10 * s + seq.below(40);
        const std::size_t n1 = seq.below(n + 1);
        const double a2 = 0.05 + 0.95 * seq.uniform();
        const auto sig = signed_signal(seq, p, s, 0.5, 1.5);
        const auto ds = generate_dataset(sig, {n1, n - n1, a2 * seq.uniform(), a2}, 500 + k);
        const double lambda = 0.02 + 0.4 * seq.uniform();
        const auto w = kkt_recovery_witness(ds, sig, lambda);
        ++total;
        if (w.boundary) { ++boundary; continue; }
        const auto sol = solve_lasso(ds, cfg(lambda, 1e-10));
        ASSERT_TRUE(sol.converged);
        const std::span<const double> beta(sol.beta.data(), sol.beta.size());
        if (w.recovery == signed_support_match(beta, sig, 1e-7)) ++agree;
    }
    EXPECT_GE(agree, static_cast<int>(0.97 * (total - boundary)));
    EXPECT_LE(boundary, total / 20);
}
