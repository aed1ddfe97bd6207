#pragma once

// Lasso  min_beta (1/(2n)) ||Y - X beta||^2 + lambda ||beta||_1
// solved by cyclic coordinate descent, plus the primal-dual (KKT) witness
// that decides signed-support recovery without solving.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mqsr/model.hpp"

namespace mqsr::lasso {

struct LassoConfig {
    double lambda = 0.0;
    double tol = 1e-8;             // stop when a full sweep moves no coordinate by >= tol
    std::size_t max_iter = 100'000;  // sweeps
    double zero_tol = kDefaultZeroTol;
    bool record_objective = false;  // keep the per-sweep objective trace

    void validate() const;
};

struct LassoSolution {
    Eigen::VectorXd beta;
    std::size_t iterations = 0;  // sweeps performed (full and active-set)
    bool converged = false;
    double objective = 0.0;      // recomputed from scratch at the returned beta
    std::vector<double> objective_trace;
};

double lasso_objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& observations,
                       const Eigen::VectorXd& beta, double lambda);

/// Throws DataError on non-finite input. Non-convergence is reported through
/// `converged`, never hidden.
LassoSolution solve_lasso(const Eigen::MatrixXd& design, const Eigen::VectorXd& observations,
                          const LassoConfig& config);
inline LassoSolution solve_lasso(const MixedDataset& dataset, const LassoConfig& config) {
    return solve_lasso(dataset.design, dataset.observations, config);
}

/// lambda = (sigma_avg^2 ln(p - s) / ((1 + s/rho^2) n))^(1/4); needs p - s >= 2.
double lambda_schedule(double sigma_avg_sq, std::size_t p, std::size_t s, std::size_t n,
                       double rho);

inline constexpr double kDefaultNoiseMargin = 0.1;

/// sigma_avg^2 (1 + s/rho^2) ln(p - s) / n.
double noise_scaling_ratio(double sigma_avg_sq, std::size_t p, std::size_t s, std::size_t n,
                           double rho);
/// Finite-size surrogate of the o(.) noise condition: ratio <= margin.
bool noise_scaling_ok(double sigma_avg_sq, std::size_t p, std::size_t s, std::size_t n,
                      double rho, double margin = kDefaultNoiseMargin);

enum class SampleSizeVerdict { BelowNecessity, AboveSufficiency, Gap };

/// n < (1-eps) n_ALG -> BelowNecessity; n > (1+eps) n_ALG -> AboveSufficiency.
SampleSizeVerdict check_sample_size(std::size_t n, std::size_t p, std::size_t s, double epsilon);

inline constexpr double kStrictMargin = 1e-9;
inline constexpr double kEqTol = 1e-9;
inline constexpr double kMaxGramCondition = 1e12;

struct KktWitnessReport {
    Eigen::VectorXd u;                     // U_i for i in S (support order)
    Eigen::VectorXd v;                     // V_j for j in S^c (ascending order)
    std::vector<double> on_support_slack;  // |beta*_i| - |U_i|
    std::vector<double> off_support_margin;  // lambda - |V_j|
    bool condition1 = false;
    bool condition2 = false;
    bool recovery = false;
    /// Some slack or margin lies within 10x its tolerance.
    bool boundary = false;
    double gram_condition = 0.0;  // condition number of X_S^T X_S
};

/// U = ((1/n) X_S^T X_S)^{-1} ((1/n) X_S^T Z - lambda sign(beta*_S)) and
/// V_j = X_j^T [X_S (X_S^T X_S)^{-1} lambda sign(beta*_S) + (I - P_S) Z / n]
/// with Z = Y - X beta*. Solved through the SVD of X_S. Throws
/// DegenerateInstanceError when cond(X_S^T X_S) > 1e12 or s >= n.
KktWitnessReport kkt_recovery_witness(const MixedDataset& dataset, const SparseSignal& truth,
                                      double lambda);

}  // namespace mqsr::lasso
