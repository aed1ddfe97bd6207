// mqsr: command-line front end (gen, plan, solve, lasso, bound, sweep).
// Indices on the command line and in files are 1-based.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mqsr/chernoff.hpp"
#include "mqsr/dataset_io.hpp"
#include "mqsr/decoders.hpp"
#include "mqsr/errors.hpp"
#include "mqsr/harness.hpp"
#include "mqsr/lasso.hpp"
#include "mqsr/model.hpp"
#include "mqsr/planner.hpp"
#include "mqsr/rng.hpp"

namespace {

using nlohmann::json;
using namespace mqsr;

constexpr int kExitInvalid = 2;
constexpr int kExitResource = 3;
constexpr int kExitIo = 4;

/// Non-finite doubles become null so the output stays valid JSON.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json one_based(const std::vector<std::size_t>& idx) {
    json out = json::array();
    for (std::size_t j : idx) out.push_back(j + 1);
    return out;
}

std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t p) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            throw DomainError("bad index '" + item + "'");
        }
        if (pos != item.size() || v < 1 || static_cast<std::size_t>(v) > p) {
            throw DomainError("index '" + item + "' must lie in 1.." + std::to_string(p));
        }
        out.push_back(static_cast<std::size_t>(v - 1));
    }
    return out;
}

/// "a:b:step" or "a,b,c".
std::vector<std::size_t> parse_count_list(const std::string& text) {
    std::vector<std::size_t> out;
    if (text.find(':') != std::string::npos) {
        std::size_t a = 0, b = 0, step = 1;
        char c1 = 0, c2 = 0;
        std::stringstream ss(text);
        ss >> a >> c1 >> b;
        if (ss >> c2) ss >> step;
        if (!ss.eof() && ss.fail()) throw DomainError("range must be a:b[:step]");
        if (c1 != ':' || step == 0 || b < a) throw DomainError("range must be a:b[:step], a <= b");
        for (std::size_t v = a; v <= b; v += step) out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(static_cast<std::size_t>(std::stoull(item)));
        } catch (const std::exception&) {
            throw DomainError("bad count '" + item + "'");
        }
    }
    return out;
}

std::vector<harness::GridPoint> parse_grid(const std::string& text) {
    std::vector<harness::GridPoint> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw DomainError("grid entries must be n1:n2");
        try {
            grid.push_back({static_cast<std::size_t>(std::stoull(item.substr(0, colon))),
                            static_cast<std::size_t>(std::stoull(item.substr(colon + 1)))});
        } catch (const std::exception&) {
            throw DomainError("bad grid entry '" + item + "'");
        }
    }
    return grid;
}

json snr_json(const SnrReport& r) {
    return {{"snr", num(r.snr)},
            {"snr1", num(r.snr1)},
            {"snr2", num(r.snr2)},
            {"sigma_avg_sq", num(r.sigma_avg_sq)},
            {"regime", std::string(to_string(r.regime))}};
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- gen
struct GenArgs {
    std::size_t p = 0, s = 0, n1 = 0, n2 = 0;
    double sigma1_sq = 1.0, sigma2_sq = 1.0, rho = 1.0;
    bool signed_values = false;
    std::string support;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t max_entries = kDefaultMaxEntries;
};

void run_gen(const GenArgs& a) {
    std::vector<std::size_t> support;
    rng::Sequence seq(rng::derive_key(a.seed, 3));
    if (!a.support.empty()) {
        support = parse_index_list(a.support, a.p);
    } else {
        if (a.s == 0 || a.s > a.p) throw DomainError("gen needs 1 <= s <= p");
        support = rng::random_subset(seq, a.p, a.s);
    }
    std::vector<double> values(support.size(), a.rho);
    if (a.signed_values) {
        for (double& v : values) v = seq.below(2) == 0 ? a.rho : -a.rho;
    }
    const auto signal = SparseSignal::make(a.p, support, values);
    const NoiseProfile noise{a.n1, a.n2, a.sigma1_sq, a.sigma2_sq};
    const auto ds = generate_dataset(signal, noise, a.seed, a.max_entries);
    io::write_dataset(ds, a.out);
    json out{{"out", a.out},
             {"p", a.p},
             {"n1", a.n1},
             {"n2", a.n2},
             {"support", one_based(signal.support())},
             {"values", signal.values()},
             {"seed", a.seed}};
    if (a.sigma1_sq > 0.0) out["snr"] = snr_json(snr_report(signal, noise));
    print(out);
}

// ---------------------------------------------------------------- plan
struct PlanArgs {
    std::size_t p = 0, s = 0, n1 = 0, n2 = 0;
    double alpha = 0.0;
    double sigma1_sq = 1.0, sigma2_sq = 1.0, delta = 0.1, epsilon = 0.5;
    std::string frontier;
    std::uint64_t seed = 0;
};

json check_json(const planner::SufficiencyCheck& c) {
    return {{"alpha1", num(c.coeff1)},
            {"alpha2", num(c.coeff2)},
            {"lhs", num(c.lhs)},
            {"target", num(c.target())},
            {"holds", c.holds}};
}

void run_plan(const PlanArgs& a) {
    const auto regime = a.alpha > 0.0 ? planner::RegimeSpec::linear(a.p, a.alpha)
                                      : planner::RegimeSpec::sublinear(a.p, a.s);
    const std::size_t s = regime.s;
    json thresholds{{"n_star", planner::recovery_threshold(planner::ThresholdKind::NStar, regime)},
                    {"n_alg", planner::recovery_threshold(planner::ThresholdKind::NAlg, regime)}};
    thresholds["n_inf"] =
        s >= 2 ? json(planner::recovery_threshold(planner::ThresholdKind::NInf, regime)) : json(nullptr);

    json out{{"p", a.p},
             {"s", s},
             {"regime", regime.kind == planner::RegimeSpec::Kind::Linear ? "linear" : "sublinear"},
             {"delta", a.delta},
             {"epsilon", a.epsilon},
             {"n1", a.n1},
             {"n2", a.n2},
             {"sigma1_sq", a.sigma1_sq},
             {"sigma2_sq", a.sigma2_sq},
             {"seed", a.seed},
             {"thresholds", thresholds}};

    for (auto setting : {planner::Setting::Agnostic, planner::Setting::Informed}) {
        planner::SufficiencyInputs in;
        in.setting = setting;
        in.n1 = a.n1;
        in.n2 = a.n2;
        in.sigma1_sq = a.sigma1_sq;
        in.sigma2_sq = a.sigma2_sq;
        in.s = s;
        in.delta = a.delta;
        in.epsilon = a.epsilon;
        in.regime = regime;
        json block = check_json(planner::check_sufficient(in));
        block["price_of_quality"] =
            planner::price_of_quality(setting, a.sigma1_sq, a.sigma2_sq, s, a.delta);
        if (!a.frontier.empty()) {
            const auto grid = parse_count_list(a.frontier);
            json pts = json::array();
            for (const auto& pt : planner::sample_frontier(in, grid)) {
                pts.push_back({{"n1", pt.n1}, {"n2", pt.n2}, {"n2_continuous", pt.n2_continuous}});
            }
            block["frontier"] = pts;
        }
        out[std::string(planner::to_string(setting))] = block;
    }
    if (a.n1 + a.n2 > 0) {
        out["snr"] = snr_json(snr_report(s, NoiseProfile{a.n1, a.n2, a.sigma1_sq, a.sigma2_sq}));
        out["lasso"] = {{"noise_scaling_ratio",
                         lasso::noise_scaling_ratio(
                             NoiseProfile{a.n1, a.n2, a.sigma1_sq, a.sigma2_sq}.sigma_avg_sq(), a.p, s,
                             a.n1 + a.n2, 1.0)},
                        {"noise_scaling_margin", lasso::kDefaultNoiseMargin}};
    }
    print(out);
}

// ---------------------------------------------------------------- solve
struct SolveArgs {
    std::string data;
    std::string decoder = "agnostic";
    std::size_t s = 0;
    std::size_t restarts = 8;
    std::size_t threads = 1;
    std::uint64_t cap = decoders::kDefaultCandidateCap;
    std::uint64_t seed = 0;
};

void run_solve(const SolveArgs& a) {
    const auto ds = io::read_dataset(a.data);
    std::size_t s = a.s;
    if (s == 0 && ds.truth) s = ds.truth->sparsity();
    if (s == 0) throw DomainError("solve needs --s when the dataset has no recorded truth");
    decoders::DecodeResult res;
    if (a.decoder == "agnostic" || a.decoder == "informed") {
        const auto objective =
            a.decoder == "agnostic" ? decoders::Objective::Agnostic : decoders::Objective::Informed;
        res = decoders::decode_exhaustive(ds, s, objective, {a.cap, a.threads});
    } else if (a.decoder == "local" || a.decoder == "local-informed") {
        const auto objective =
            a.decoder == "local" ? decoders::Objective::Agnostic : decoders::Objective::Informed;
        res = decoders::decode_local_search(ds, s, objective, a.restarts, a.seed);
    } else {
        throw DomainError("decoder must be agnostic, informed, local or local-informed");
    }
    json out{{"decoder", a.decoder},
             {"s", s},
             {"support", one_based(res.support)},
             {"loss", res.loss},
             {"scanned", res.scanned},
             {"exhaustive", res.exhaustive}};
    if (ds.truth) {
        out["support_error"] = support_error(res.support, ds.truth->support());
        out["truth_loss"] = decoders::support_loss(
            ds, ds.truth->support(),
            a.decoder.find("informed") != std::string::npos ? decoders::Objective::Informed
                                                            : decoders::Objective::Agnostic);
    }
    print(out);
}

// ---------------------------------------------------------------- lasso
struct LassoArgs {
    std::string data;
    std::optional<double> lambda;
    double rho = 0.0;
    double tol = 1e-8;
    std::size_t max_iter = 100'000;
    bool witness = true;
    std::uint64_t seed = 0;
};

void run_lasso(const LassoArgs& a) {
    const auto ds = io::read_dataset(a.data);
    lasso::LassoConfig cfg;
    cfg.tol = a.tol;
    cfg.max_iter = a.max_iter;
    std::string rule = "fixed";
    if (a.lambda) {
        cfg.lambda = *a.lambda;
    } else {
        if (!ds.truth && a.rho <= 0.0) {
            throw DomainError("lambda schedule needs --rho or a dataset with recorded truth");
        }
        const std::size_t s = ds.truth ? ds.truth->sparsity() : 0;
        const double rho = a.rho > 0.0 ? a.rho : ds.truth->rho();
        cfg.lambda = lasso::lambda_schedule(ds.noise.sigma_avg_sq(), ds.p(), s, ds.n(), rho);
        rule = "schedule";
    }
    const auto sol = lasso::solve_lasso(ds, cfg);
    std::vector<std::size_t> nonzero;
    for (Eigen::Index j = 0; j < sol.beta.size(); ++j) {
        if (std::abs(sol.beta(j)) > cfg.zero_tol) nonzero.push_back(static_cast<std::size_t>(j));
    }
    json out{{"lambda", cfg.lambda},
             {"lambda_rule", rule},
             {"converged", sol.converged},
             {"iterations", sol.iterations},
             {"objective", sol.objective},
             {"support", one_based(nonzero)},
             {"beta", std::vector<double>(sol.beta.data(), sol.beta.data() + sol.beta.size())}};
    if (ds.truth) {
        const std::span<const double> beta(sol.beta.data(), static_cast<std::size_t>(sol.beta.size()));
        out["signed_support_match"] = signed_support_match(beta, *ds.truth, cfg.zero_tol);
        out["sign_mismatches"] = sign_mismatches(beta, *ds.truth, cfg.zero_tol);
        if (a.witness) {
            try {
                const auto w = lasso::kkt_recovery_witness(ds, *ds.truth, cfg.lambda);
                out["witness"] = {{"condition1", w.condition1},
                                  {"condition2", w.condition2},
                                  {"recovery", w.recovery},
                                  {"boundary", w.boundary},
                                  {"gram_condition", num(w.gram_condition)},
                                  {"on_support_slack", w.on_support_slack},
                                  {"off_support_margin", w.off_support_margin}};
            } catch (const DegenerateInstanceError& e) {
                out["witness"] = {{"error", e.what()}};
            }
        }
    }
    print(out);
}

// ---------------------------------------------------------------- bound
struct BoundArgs {
    std::string setting = "agnostic";
    std::size_t n1 = 0, n2 = 0, m = 0, s = 0, p = 0;
    double sigma1_sq = 1.0, sigma2_sq = 1.0;
    double delta = 0.0;
    std::optional<double> theta;
    std::uint64_t mc_trials = 0;
    std::size_t threads = 1;
    std::uint64_t seed = 0;
};

void run_bound(const BoundArgs& a) {
    chernoff::ChernoffQuery q;
    q.setting = a.setting == "informed" ? chernoff::Setting::Informed : chernoff::Setting::Agnostic;
    if (a.setting != "agnostic" && a.setting != "informed") {
        throw DomainError("setting must be agnostic or informed");
    }
    q.n1 = a.n1;
    q.n2 = a.n2;
    q.sigma1_sq = a.sigma1_sq;
    q.sigma2_sq = a.sigma2_sq;
    if (a.m > 0) {
        q.m = a.m;
    } else if (a.delta > 0.0 && a.s > 0) {
        q.m = chernoff::overlap_deficit(a.delta, a.s);
    } else {
        throw DomainError("bound needs --m or both --delta and --s");
    }
    q.theta = a.theta;
    q.validate();

    json out{{"setting", a.setting},
             {"n1", q.n1},
             {"n2", q.n2},
             {"sigma1_sq", q.sigma1_sq},
             {"sigma2_sq", q.sigma2_sq},
             {"m", q.m},
             {"relaxed_theta", chernoff::relaxed_theta(q)},
             {"bound", chernoff::chernoff_bound(q)},
             {"log_bound", chernoff::log_chernoff_bound(q)}};
    if (q.theta) {
        out["theta"] = *q.theta;
        out["mgf_hq"] = num(chernoff::block_mgf(q, chernoff::Block::HQ));
        out["mgf_lq"] = num(chernoff::block_mgf(q, chernoff::Block::LQ));
        out["log_bound_at_theta"] = num(chernoff::log_bound_at(q, *q.theta));
    }
    if (q.setting == chernoff::Setting::Agnostic) {
        const auto opt = chernoff::optimal_theta_agnostic(q);
        out["optimal_theta"] = opt.theta;
        out["optimal_log_bound"] = opt.log_bound;
        out["optimal_bound"] = std::exp(opt.log_bound);
        out["optimal_from_cubic"] = opt.from_cubic;
    }
    if (a.mc_trials > 0) {
        if (q.m % 2 != 0) throw DomainError("Monte Carlo misranking needs an even m");
        const std::size_t s = a.s > 0 ? a.s : q.m / 2;
        const std::size_t p = a.p > 0 ? a.p : s + q.m / 2;
        if (q.m / 2 > s || p < s + q.m / 2) {
            throw DomainError("Monte Carlo misranking needs m/2 <= s and p >= s + m/2");
        }
        // Truth {0..s-1}; the candidate swaps its last m/2 indices for s..s+m/2-1.
        std::vector<std::size_t> truth(s), cand(s);
        for (std::size_t k = 0; k < s; ++k) truth[k] = cand[k] = k;
        for (std::size_t k = 0; k < q.m / 2; ++k) cand[s - 1 - k] = s + k;
        const auto est = chernoff::empirical_misrank(
            SparseSignal::binary(p, truth), NoiseProfile{q.n1, q.n2, q.sigma1_sq, q.sigma2_sq}, cand,
            q.setting, a.mc_trials, a.seed, a.threads);
        out["monte_carlo"] = {{"trials", est.trials},
                              {"hits", est.hits},
                              {"estimate", est.estimate},
                              {"ci95", est.ci95},
                              {"seed", a.seed}};
    }
    print(out);
}

// ---------------------------------------------------------------- sweep
struct SweepArgs {
    std::string config;
    std::string decoder, grid;
    std::optional<std::size_t> p, s, trials, restarts;
    std::optional<double> rho, sigma1_sq, sigma2_sq, delta, lambda;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
    std::string formats = "csv";
    std::string out = "sweep_out";
};

void run_sweep_cmd(const SweepArgs& a) {
    json j = json::object();
    if (!a.config.empty()) {
        try {
            j = json::parse(io::read_text_file(a.config));
        } catch (const json::parse_error& e) {
            throw DomainError("config '" + a.config + "' is not valid JSON: " + e.what());
        }
    }
    if (!a.decoder.empty()) j["decoder"] = a.decoder;
    if (a.p) j["p"] = *a.p;
    if (a.s) j["s"] = *a.s;
    if (a.trials) j["trials_per_point"] = *a.trials;
    if (a.restarts) j["restarts"] = *a.restarts;
    if (a.rho) j["rho"] = *a.rho;
    if (a.sigma1_sq) j["sigma1_sq"] = *a.sigma1_sq;
    if (a.sigma2_sq) j["sigma2_sq"] = *a.sigma2_sq;
    if (a.delta) j["delta"] = *a.delta;
    if (a.lambda) j["lambda_rule"] = {{"Fixed", *a.lambda}};
    if (a.seed) j["master_seed"] = *a.seed;
    if (!a.grid.empty()) {
        json g = json::array();
        for (const auto& pt : parse_grid(a.grid)) g.push_back({pt.n1, pt.n2});
        j["grid"] = g;
    }
    const auto config = harness::ExperimentConfig::from_json(j);
    const auto formats = harness::parse_formats(a.formats);
    const auto records = harness::run_sweep(config, a.threads);
    const auto summary = harness::summarize(config, records);
    const auto files = harness::emit_outputs(summary, records, a.out, formats);
    io::write_text_file(std::filesystem::path(a.out) / "config.json", config.to_json().dump(2) + "\n");

    json rows = json::array();
    for (const auto& r : summary) {
        rows.push_back({{"n1", r.n1},
                        {"n2", r.n2},
                        {"n", r.n},
                        {"recovered", r.recovered},
                        {"trials", r.trials},
                        {"recovery_rate", num(r.recovery_rate)},
                        {"ci95", num(r.ci95)}});
    }
    json manifest = json::array();
    for (const auto& f : files) manifest.push_back(f.string());
    manifest.push_back((std::filesystem::path(a.out) / "config.json").string());
    print({{"summary", rows}, {"files", manifest}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse support recovery under mixed-quality observations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "mqsr 0.1.0");

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Synthesize a dataset directory (meta.json, X.csv, Y.csv)");
    g->add_option("--p", gen.p, "Dimension")->required();
    g->add_option("--s", gen.s, "Sparsity (ignored with --support)");
    g->add_option("--n1", gen.n1, "High-quality samples")->required();
    g->add_option("--n2", gen.n2, "Low-quality samples")->required();
    g->add_option("--sigma1-sq", gen.sigma1_sq, "High-quality noise variance")->required();
    g->add_option("--sigma2-sq", gen.sigma2_sq, "Low-quality noise variance")->required();
    g->add_option("--rho", gen.rho, "Magnitude of nonzero entries");
    g->add_flag("--signed", gen.signed_values, "Random signs on the nonzero entries");
    g->add_option("--support", gen.support, "Explicit 1-based support, e.g. 3,7,9");
    g->add_option("--max-entries", gen.max_entries, "Cap on n*p");
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--out", gen.out, "Output directory")->required();

    PlanArgs plan;
    auto* pl = app.add_subcommand("plan", "Thresholds, sufficiency checks, price of quality, frontiers");
    pl->add_option("--p", plan.p, "Dimension")->required();
    pl->add_option("--s", plan.s, "Sparsity (sublinear regime)");
    pl->add_option("--alpha", plan.alpha, "Linear regime s = round(alpha p)");
    pl->add_option("--n1", plan.n1, "High-quality samples");
    pl->add_option("--n2", plan.n2, "Low-quality samples");
    pl->add_option("--sigma1-sq", plan.sigma1_sq, "High-quality noise variance")->required();
    pl->add_option("--sigma2-sq", plan.sigma2_sq, "Low-quality noise variance")->required();
    pl->add_option("--delta", plan.delta, "Support error tolerance (default 0.1)");
    pl->add_option("--epsilon", plan.epsilon, "Sufficiency slack (default 0.5)");
    pl->add_option("--frontier", plan.frontier, "n1 values for the frontier: a:b[:step] or a,b,c");
    pl->add_option("--seed", plan.seed, "Accepted for uniformity; planning is deterministic");

    SolveArgs solve;
    auto* so = app.add_subcommand("solve", "Run a combinatorial decoder on a dataset directory");
    so->add_option("--data", solve.data, "Dataset directory")->required();
    so->add_option("--decoder", solve.decoder, "agnostic | informed | local | local-informed");
    so->add_option("--s", solve.s, "Sparsity (default: from the recorded truth)");
    so->add_option("--restarts", solve.restarts, "Local search restarts");
    so->add_option("--threads", solve.threads, "Worker threads for the exhaustive scan (0 = all)");
    so->add_option("--cap", solve.cap, "Exhaustive candidate cap");
    so->add_option("--seed", solve.seed, "Local search seed");

    LassoArgs las;
    auto* la = app.add_subcommand("lasso", "Solve the Lasso and evaluate the KKT witness");
    la->add_option("--data", las.data, "Dataset directory")->required();
    la->add_option("--lambda", las.lambda, "Fixed lambda (default: the noise-scaled schedule)");
    la->add_option("--rho", las.rho, "Signal magnitude for the schedule (default: from truth)");
    la->add_option("--tol", las.tol, "Max coordinate change stopping rule");
    la->add_option("--max-iter", las.max_iter, "Sweep limit");
    la->add_flag("!--no-witness", las.witness, "Skip the KKT witness");
    la->add_option("--seed", las.seed, "Accepted for uniformity; the solver is deterministic");

    BoundArgs bound;
    auto* bo = app.add_subcommand("bound", "Chernoff bounds and Monte Carlo misranking");
    bo->add_option("--setting", bound.setting, "agnostic | informed");
    bo->add_option("--n1", bound.n1, "High-quality samples")->required();
    bo->add_option("--n2", bound.n2, "Low-quality samples")->required();
    bo->add_option("--sigma1-sq", bound.sigma1_sq, "High-quality noise variance")->required();
    bo->add_option("--sigma2-sq", bound.sigma2_sq, "Low-quality noise variance")->required();
    bo->add_option("--m", bound.m, "Symmetric difference size |S Delta S*|");
    bo->add_option("--delta", bound.delta, "With --s: m = smallest even integer >= 2 delta s");
    bo->add_option("--s", bound.s, "Sparsity");
    bo->add_option("--p", bound.p, "Dimension for Monte Carlo (default s + m/2)");
    bo->add_option("--theta", bound.theta, "Evaluate block MGFs at this theta");
    bo->add_option("--mc-trials", bound.mc_trials, "Monte Carlo trials (0 = skip)");
    bo->add_option("--threads", bound.threads, "Worker threads (0 = all)");
    bo->add_option("--seed", bound.seed, "Monte Carlo seed");

    SweepArgs sweep;
    auto* sw = app.add_subcommand("sweep", "Monte Carlo phase-transition experiment");
    sw->add_option("--config", sweep.config, "ExperimentConfig JSON file");
    sw->add_option("--decoder", sweep.decoder, "AgnosticScan | InformedMLE | Lasso | LocalSearch");
    sw->add_option("--p", sweep.p, "Dimension");
    sw->add_option("--s", sweep.s, "Sparsity");
    sw->add_option("--rho", sweep.rho, "Signal magnitude");
    sw->add_option("--sigma1-sq", sweep.sigma1_sq, "High-quality noise variance");
    sw->add_option("--sigma2-sq", sweep.sigma2_sq, "Low-quality noise variance");
    sw->add_option("--grid", sweep.grid, "Grid as n1:n2,n1:n2,...");
    sw->add_option("--trials", sweep.trials, "Trials per grid point");
    sw->add_option("--delta", sweep.delta, "Support error tolerance");
    sw->add_option("--lambda", sweep.lambda, "Fixed Lasso lambda");
    sw->add_option("--restarts", sweep.restarts, "Local search restarts");
    sw->add_option("--seed", sweep.seed, "Master seed");
    sw->add_option("--threads", sweep.threads, "Worker threads (0 = all)");
    sw->add_option("--formats", sweep.formats, "csv, svg or csv,svg");
    sw->add_option("--out", sweep.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*g) run_gen(gen);
        if (*pl) run_plan(plan);
        if (*so) run_solve(solve);
        if (*la) run_lasso(las);
        if (*bo) run_bound(bound);
        if (*sw) run_sweep_cmd(sweep);
    } catch (const ResourceError& e) {
        std::cerr << "mqsr: resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const IoError& e) {
        std::cerr << "mqsr: i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "mqsr: invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "mqsr: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
