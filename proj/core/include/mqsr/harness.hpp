#pragma once

// Seeded Monte Carlo sweeps over (n1, n2) grids, aggregation and output files.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mqsr/decoders.hpp"

namespace mqsr::harness {

enum class DecoderKind { AgnosticScan, InformedMLE, Lasso, LocalSearch };

std::string_view to_string(DecoderKind kind) noexcept;
DecoderKind parse_decoder(std::string_view name);

struct LambdaRule {
    enum class Kind { Prop4Schedule, Fixed };
    Kind kind = Kind::Prop4Schedule;
    double value = 0.0;  // Fixed only
};

struct GridPoint {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    bool operator==(const GridPoint&) const = default;
};

struct ExperimentConfig {
    DecoderKind decoder = DecoderKind::AgnosticScan;
    std::size_t p = 0;
    std::size_t s = 0;
    double rho = 1.0;
    double sigma1_sq = 1.0;
    double sigma2_sq = 1.0;
    std::vector<GridPoint> grid;
    std::size_t trials_per_point = 1;
    double delta = 0.1;
    LambdaRule lambda_rule;
    std::uint64_t master_seed = 0;

    // Decoder tuning.
    std::size_t restarts = 8;                          // LocalSearch
    decoders::Objective local_objective = decoders::Objective::Agnostic;  // LocalSearch
    std::uint64_t candidate_cap = decoders::kDefaultCandidateCap;
    double lasso_tol = 1e-8;
    std::size_t lasso_max_iter = 100'000;

    /// Throws DomainError on invalid fields and ResourceError when an
    /// exhaustive decoder would exceed the candidate cap.
    void validate() const;

    /// Keys mirror the field names. Unknown keys are rejected.
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct TrialRecord {
    std::size_t point = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;  // rng::derive_seed(master_seed, point, trial)
    bool recovered = false;
    /// |S_hat symmetric-difference S*| for combinatorial decoders; the number
    /// of sign-mismatched coordinates for the Lasso.
    std::size_t error_count = 0;
    double wall_ms = 0.0;
    bool failed = false;

    /// Equality ignoring wall_ms.
    bool same_outcome(const TrialRecord& other) const noexcept;
};

/// One trial. Signal support is a uniform s-subset; combinatorial decoders use
/// beta = 1_S, the Lasso uses +-rho with uniform signs. Exceptions inside the
/// decoder are recorded as failed, never rethrown.
TrialRecord run_trial(const ExperimentConfig& config, std::size_t point, std::size_t trial);

/// grid.size() * trials_per_point records, ordered by (point, trial).
/// Everything except wall_ms is independent of `threads` (0 = all cores).
std::vector<TrialRecord> run_sweep(const ExperimentConfig& config, std::size_t threads = 0);

struct SummaryRow {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t recovered = 0;
    double recovery_rate = 0.0;
    double ci95 = 0.0;        // Wilson 95% half-width
    double mean_error = 0.0;  // over trials that did not throw; NaN if none
    double n_star = 0.0;
    double n_inf = 0.0;  // NaN when s < 2
    double n_alg = 0.0;
};

std::vector<SummaryRow> summarize(const ExperimentConfig& config,
                                  const std::vector<TrialRecord>& records);

enum class Format { Csv, Svg };

std::set<Format> parse_formats(std::string_view list);

std::string summary_csv(const std::vector<SummaryRow>& summary);
std::string trials_csv(const std::vector<TrialRecord>& records);
std::string phase_svg(const std::vector<SummaryRow>& summary);

/// Writes summary.csv and trials.csv (Csv) and phase.svg (Svg) into
/// `out_dir`, creating it if needed. Returns the written paths.
std::vector<std::filesystem::path> emit_outputs(const std::vector<SummaryRow>& summary,
                                                const std::vector<TrialRecord>& records,
                                                const std::filesystem::path& out_dir,
                                                const std::set<Format>& formats);

}  // namespace mqsr::harness
