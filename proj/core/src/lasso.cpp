#include "mqsr/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mqsr/errors.hpp"
#include "mqsr/planner.hpp"

namespace mqsr::lasso {

void LassoConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lasso lambda must be finite and nonnegative");
    }
    if (!(tol > 0.0)) throw DomainError("lasso tol must be positive");
    if (max_iter == 0) throw DomainError("lasso max_iter must be positive");
    if (!(zero_tol >= 0.0)) throw DomainError("lasso zero_tol must be nonnegative");
}

double lasso_objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& observations,
                       const Eigen::VectorXd& beta, double lambda) {
    const double n = static_cast<double>(design.rows());
    const Eigen::VectorXd residual = observations - design * beta;
    return residual.squaredNorm() / (2.0 * n) + lambda * beta.lpNorm<1>();
}

namespace {

double soft_threshold(double z, double lambda) noexcept {
    if (z > lambda) return z - lambda;
    if (z < -lambda) return z + lambda;
    return 0.0;
}

class CoordinateDescent {
public:
    CoordinateDescent(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda)
        : x_(x), lambda_(lambda), n_(static_cast<double>(x.rows())),
          beta_(Eigen::VectorXd::Zero(x.cols())), residual_(y), scale_(x.cols()) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) scale_(j) = x.col(j).squaredNorm() / n_;
    }

    /// Exact minimisation in coordinate j; returns |change|.
    double update(Eigen::Index j) {
        if (scale_(j) == 0.0) return 0.0;
        const double old = beta_(j);
        const double z = x_.col(j).dot(residual_) / n_ + scale_(j) * old;
        const double fresh = soft_threshold(z, lambda_) / scale_(j);
        const double change = fresh - old;
        if (change != 0.0) {
            residual_.noalias() -= change * x_.col(j);
            beta_(j) = fresh;
        }
        return std::abs(change);
    }

    double objective() const {
        return residual_.squaredNorm() / (2.0 * n_) + lambda_ * beta_.lpNorm<1>();
    }

    const Eigen::VectorXd& beta() const { return beta_; }

private:
    const Eigen::MatrixXd& x_;
    double lambda_;
    double n_;
    Eigen::VectorXd beta_;
    Eigen::VectorXd residual_;
    Eigen::VectorXd scale_;
};

}  // namespace

LassoSolution solve_lasso(const Eigen::MatrixXd& design, const Eigen::VectorXd& observations,
                          const LassoConfig& config) {
    config.validate();
    if (design.rows() == 0 || design.rows() != observations.size()) {
        throw DomainError("lasso needs n >= 1 rows matching the observation length");
    }
    if (!design.allFinite() || !observations.allFinite()) {
        throw DataError("lasso input contains non-finite values");
    }

    CoordinateDescent cd(design, observations, config.lambda);
    LassoSolution out;
    const Eigen::Index p = design.cols();
    std::vector<Eigen::Index> active;

    // Full sweeps decide convergence; between them we cycle over the current
    // nonzero set until it settles.
    while (out.iterations < config.max_iter) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) max_change = std::max(max_change, cd.update(j));
        ++out.iterations;
        if (config.record_objective) out.objective_trace.push_back(cd.objective());
        if (max_change < config.tol) {
            out.converged = true;
            break;
        }

        active.clear();
        for (Eigen::Index j = 0; j < p; ++j) {
            if (cd.beta()(j) != 0.0) active.push_back(j);
        }
        while (out.iterations < config.max_iter) {
            double inner_change = 0.0;
            for (Eigen::Index j : active) inner_change = std::max(inner_change, cd.update(j));
            ++out.iterations;
            if (config.record_objective) out.objective_trace.push_back(cd.objective());
            if (inner_change < config.tol) break;
        }
    }

    out.beta = cd.beta();
    out.objective = lasso_objective(design, observations, out.beta, config.lambda);
    return out;
}

double lambda_schedule(double sigma_avg_sq, std::size_t p, std::size_t s, std::size_t n,
                       double rho) {
    if (s == 0 || n == 0 || !(rho > 0.0) || p <= s) {
        throw DomainError("lambda schedule needs p > s >= 1, n >= 1, rho > 0");
    }
    if (p - s < 2) throw DomainError("lambda schedule needs p - s >= 2 (ln(p - s) > 0)");
    if (!(sigma_avg_sq >= 0.0)) throw DomainError("sigma_avg^2 must be nonnegative");
    const double sd = static_cast<double>(s);
    const double value = sigma_avg_sq * std::log(static_cast<double>(p - s)) /
                         ((1.0 + sd / (rho * rho)) * static_cast<double>(n));
    return std::pow(value, 0.25);
}

double noise_scaling_ratio(double sigma_avg_sq, std::size_t p, std::size_t s, std::size_t n,
                           double rho) {
    if (s == 0 || n == 0 || !(rho > 0.0) || p <= s + 1) {
        throw DomainError("noise scaling check needs p - s >= 2, s >= 1, n >= 1, rho > 0");
    }
    const double sd = static_cast<double>(s);
    return sigma_avg_sq * (1.0 + sd / (rho * rho)) * std::log(static_cast<double>(p - s)) /
           static_cast<double>(n);
}

bool noise_scaling_ok(double sigma_avg_sq, std::size_t p, std::size_t s, std::size_t n,
                      double rho, double margin) {
    return noise_scaling_ratio(sigma_avg_sq, p, s, n, rho) <= margin;
}

SampleSizeVerdict check_sample_size(std::size_t n, std::size_t p, std::size_t s, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    const double n_alg =
        planner::recovery_threshold(planner::ThresholdKind::NAlg, planner::RegimeSpec::sublinear(p, s));
    const double nd = static_cast<double>(n);
    if (nd < (1.0 - epsilon) * n_alg) return SampleSizeVerdict::BelowNecessity;
    if (nd > (1.0 + epsilon) * n_alg) return SampleSizeVerdict::AboveSufficiency;
    return SampleSizeVerdict::Gap;
}

KktWitnessReport kkt_recovery_witness(const MixedDataset& dataset, const SparseSignal& truth,
                                      double lambda) {
    const Eigen::Index n = dataset.design.rows();
    const Eigen::Index p = dataset.design.cols();
    const auto s = static_cast<Eigen::Index>(truth.sparsity());
    if (static_cast<std::size_t>(p) != truth.dimension()) {
        throw DomainError("signal dimension differs from the design width");
    }
    if (s >= n) throw DegenerateInstanceError("witness needs s < n");
    if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");

    Eigen::MatrixXd xs(n, s);
    Eigen::VectorXd sign_s(s);
    Eigen::VectorXd beta_s(s);
    for (Eigen::Index k = 0; k < s; ++k) {
        xs.col(k) = dataset.design.col(static_cast<Eigen::Index>(truth.support()[k]));
        beta_s(k) = truth.values()[static_cast<std::size_t>(k)];
        sign_s(k) = beta_s(k) > 0.0 ? 1.0 : -1.0;
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    KktWitnessReport report;
    const double smin = sv(s - 1);
    report.gram_condition = smin > 0.0 ? (sv(0) / smin) * (sv(0) / smin)
                                       : std::numeric_limits<double>::infinity();
    if (!(report.gram_condition <= kMaxGramCondition)) {
        throw DegenerateInstanceError("X_S^T X_S is numerically singular (condition " +
                                      std::to_string(report.gram_condition) + ")");
    }

    const double nd = static_cast<double>(n);
    const Eigen::VectorXd noise = dataset.observations - dataset.design * truth.dense();
    const Eigen::MatrixXd& left = svd.matrixU();
    const Eigen::MatrixXd& right = svd.matrixV();
    const Eigen::VectorXd inv_sv = sv.cwiseInverse();

    // ((1/n) X_S^T X_S)^{-1} c = n V diag(1/sv^2) V^T c
    const Eigen::VectorXd c = xs.transpose() * noise / nd - lambda * sign_s;
    report.u = nd * (right * (inv_sv.cwiseProduct(inv_sv).asDiagonal() * (right.transpose() * c)));

    // X_S (X_S^T X_S)^{-1} b = U diag(1/sv) V^T b;  (I - P) Z = Z - U U^T Z
    const Eigen::VectorXd dual_part =
        left * (inv_sv.asDiagonal() * (right.transpose() * (lambda * sign_s)));
    const Eigen::VectorXd projected_noise = noise - left * (left.transpose() * noise);
    const Eigen::VectorXd direction = dual_part + projected_noise / nd;

    report.v.resize(p - s);
    Eigen::Index next = 0;
    std::size_t k = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (k < truth.sparsity() && truth.support()[k] == static_cast<std::size_t>(j)) {
            ++k;
            continue;
        }
        report.v(next++) = dataset.design.col(j).dot(direction);
    }

    double min_slack = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < s; ++i) {
        const double slack = std::abs(beta_s(i)) - std::abs(report.u(i));
        report.on_support_slack.push_back(slack);
        min_slack = std::min(min_slack, slack);
        if (std::abs(slack) < 10.0 * kStrictMargin) report.boundary = true;
    }
    double min_margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < report.v.size(); ++j) {
        const double margin = lambda - std::abs(report.v(j));
        report.off_support_margin.push_back(margin);
        min_margin = std::min(min_margin, margin);
        if (std::abs(margin) < 10.0 * kEqTol) report.boundary = true;
    }
    report.condition1 = min_slack > kStrictMargin;
    report.condition2 = min_margin >= -kEqTol;
    report.recovery = report.condition1 && report.condition2;
    return report;
}

}  // namespace mqsr::lasso
