#include "mqsr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "mqsr/dataset_io.hpp"
#include "mqsr/errors.hpp"
#include "mqsr/lasso.hpp"
#include "mqsr/model.hpp"
#include "mqsr/parallel.hpp"
#include "mqsr/planner.hpp"
#include "mqsr/rng.hpp"
#include "mqsr/stats.hpp"

namespace mqsr::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSignalTag = 3;
constexpr std::uint64_t kSearchTag = 4;

bool exhaustive(DecoderKind kind) noexcept {
    return kind == DecoderKind::AgnosticScan || kind == DecoderKind::InformedMLE;
}

template <class T>
T take(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DomainError(std::string("config field '") + key + "': " + e.what());
    }
}

LambdaRule parse_lambda_rule(const json& j) {
    LambdaRule rule;
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "Prop4Schedule") return rule;
        throw DomainError("lambda_rule must be \"Prop4Schedule\" or {\"Fixed\": value}");
    }
    if (j.is_object() && j.size() == 1 && j.contains("Fixed") && j["Fixed"].is_number()) {
        rule.kind = LambdaRule::Kind::Fixed;
        rule.value = j["Fixed"].get<double>();
        return rule;
    }
    throw DomainError("lambda_rule must be \"Prop4Schedule\" or {\"Fixed\": value}");
}

GridPoint parse_grid_point(const json& j) {
    try {
        if (j.is_array() && j.size() == 2) {
            return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
        }
        if (j.is_object()) return {j.at("n1").get<std::size_t>(), j.at("n2").get<std::size_t>()};
    } catch (const json::exception& e) {
        throw DomainError(std::string("grid point: ") + e.what());
    }
    throw DomainError("grid points must be [n1, n2] or {\"n1\": .., \"n2\": ..}");
}

SparseSignal draw_signal(const ExperimentConfig& config, std::uint64_t trial_seed) {
    rng::Sequence seq(rng::derive_key(trial_seed, kSignalTag));
    auto support = rng::random_subset(seq, config.p, config.s);
    if (config.decoder != DecoderKind::Lasso) return SparseSignal::binary(config.p, support);
    std::vector<double> values(config.s);
    for (double& v : values) v = seq.below(2) == 0 ? config.rho : -config.rho;
    return SparseSignal::make(config.p, std::move(support), std::move(values));
}

double lambda_for(const ExperimentConfig& config, const NoiseProfile& noise) {
    if (config.lambda_rule.kind == LambdaRule::Kind::Fixed) return config.lambda_rule.value;
    return lasso::lambda_schedule(noise.sigma_avg_sq(), config.p, config.s, noise.n(), config.rho);
}

}  // namespace

std::string_view to_string(DecoderKind kind) noexcept {
    switch (kind) {
        case DecoderKind::AgnosticScan: return "AgnosticScan";
        case DecoderKind::InformedMLE: return "InformedMLE";
        case DecoderKind::Lasso: return "Lasso";
        case DecoderKind::LocalSearch: return "LocalSearch";
    }
    return "AgnosticScan";
}

DecoderKind parse_decoder(std::string_view name) {
    for (auto kind : {DecoderKind::AgnosticScan, DecoderKind::InformedMLE, DecoderKind::Lasso,
                      DecoderKind::LocalSearch}) {
        if (name == to_string(kind)) return kind;
    }
    throw DomainError("unknown decoder '" + std::string(name) +
                      "' (AgnosticScan, InformedMLE, Lasso, LocalSearch)");
}

void ExperimentConfig::validate() const {
    if (s == 0 || p <= s) throw DomainError("config needs p > s >= 1");
    if (grid.empty()) throw DomainError("config grid must be nonempty");
    for (const auto& g : grid) {
        if (g.n1 + g.n2 == 0) throw DomainError("grid points need n1 + n2 >= 1");
    }
    if (trials_per_point == 0) throw DomainError("trials_per_point must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
    NoiseProfile{1, 0, sigma1_sq, sigma2_sq}.validate();
    if (decoder == DecoderKind::Lasso) {
        if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("Lasso config needs rho > 0");
        if (lambda_rule.kind == LambdaRule::Kind::Fixed &&
            (!(lambda_rule.value >= 0.0) || !std::isfinite(lambda_rule.value))) {
            throw DomainError("fixed lambda must be finite and nonnegative");
        }
        if (lambda_rule.kind == LambdaRule::Kind::Prop4Schedule && p - s < 2) {
            throw DomainError("the lambda schedule needs p - s >= 2");
        }
        if (!(lasso_tol > 0.0) || lasso_max_iter == 0) {
            throw DomainError("lasso_tol and lasso_max_iter must be positive");
        }
    }
    if (decoder == DecoderKind::InformedMLE ||
        (decoder == DecoderKind::LocalSearch && local_objective == decoders::Objective::Informed)) {
        if (!(sigma1_sq > 0.0)) throw DomainError("informed decoding needs positive variances");
    }
    if (decoder == DecoderKind::LocalSearch && restarts == 0) {
        throw DomainError("LocalSearch needs restarts >= 1");
    }
    if (exhaustive(decoder) && decoders::binomial(p, s) > candidate_cap) {
        throw ResourceError("C(" + std::to_string(p) + ", " + std::to_string(s) +
                            ") exceeds the exhaustive cap of " + std::to_string(candidate_cap) +
                            "; choose decoder LocalSearch for this size");
    }
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    static const std::set<std::string> known = {
        "decoder",       "p",          "s",
        "rho",           "sigma1_sq",  "sigma2_sq",
        "grid",          "trials_per_point", "delta",
        "lambda_rule",   "master_seed", "restarts",
        "local_objective", "candidate_cap", "lasso_tol",
        "lasso_max_iter"};
    for (const auto& item : j.items()) {
        if (!known.count(item.key())) throw DomainError("unknown config field '" + item.key() + "'");
    }
    ExperimentConfig c;
    c.decoder = parse_decoder(take<std::string>(j, "decoder"));
    c.p = take<std::size_t>(j, "p");
    c.s = take<std::size_t>(j, "s");
    if (j.contains("rho")) c.rho = take<double>(j, "rho");
    c.sigma1_sq = take<double>(j, "sigma1_sq");
    c.sigma2_sq = take<double>(j, "sigma2_sq");
    if (!j.contains("grid") || !j["grid"].is_array()) throw DomainError("config needs a grid array");
    for (const auto& g : j["grid"]) c.grid.push_back(parse_grid_point(g));
    c.trials_per_point = take<std::size_t>(j, "trials_per_point");
    if (j.contains("delta")) c.delta = take<double>(j, "delta");
    if (j.contains("lambda_rule")) c.lambda_rule = parse_lambda_rule(j["lambda_rule"]);
    if (j.contains("master_seed")) c.master_seed = take<std::uint64_t>(j, "master_seed");
    if (j.contains("restarts")) c.restarts = take<std::size_t>(j, "restarts");
    if (j.contains("local_objective")) {
        const auto name = take<std::string>(j, "local_objective");
        if (name == "agnostic") {
            c.local_objective = decoders::Objective::Agnostic;
        } else if (name == "informed") {
            c.local_objective = decoders::Objective::Informed;
        } else {
            throw DomainError("local_objective must be \"agnostic\" or \"informed\"");
        }
    }
    if (j.contains("candidate_cap")) c.candidate_cap = take<std::uint64_t>(j, "candidate_cap");
    if (j.contains("lasso_tol")) c.lasso_tol = take<double>(j, "lasso_tol");
    if (j.contains("lasso_max_iter")) c.lasso_max_iter = take<std::size_t>(j, "lasso_max_iter");
    return c;
}

json ExperimentConfig::to_json() const {
    json grid_json = json::array();
    for (const auto& g : grid) grid_json.push_back({g.n1, g.n2});
    json rule = lambda_rule.kind == LambdaRule::Kind::Fixed ? json{{"Fixed", lambda_rule.value}}
                                                             : json("Prop4Schedule");
    return {{"decoder", std::string(to_string(decoder))},
            {"p", p},
            {"s", s},
            {"rho", rho},
            {"sigma1_sq", sigma1_sq},
            {"sigma2_sq", sigma2_sq},
            {"grid", grid_json},
            {"trials_per_point", trials_per_point},
            {"delta", delta},
            {"lambda_rule", rule},
            {"master_seed", master_seed},
            {"restarts", restarts},
            {"local_objective",
             local_objective == decoders::Objective::Agnostic ? "agnostic" : "informed"},
            {"candidate_cap", candidate_cap},
            {"lasso_tol", lasso_tol},
            {"lasso_max_iter", lasso_max_iter}};
}

bool TrialRecord::same_outcome(const TrialRecord& o) const noexcept {
    return point == o.point && n1 == o.n1 && n2 == o.n2 && trial == o.trial && seed == o.seed &&
           recovered == o.recovered && error_count == o.error_count && failed == o.failed;
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t point, std::size_t trial) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.point = point;
    rec.n1 = config.grid.at(point).n1;
    rec.n2 = config.grid.at(point).n2;
    rec.trial = trial;
    rec.seed = rng::derive_seed(config.master_seed, point, trial);

    try {
        const SparseSignal signal = draw_signal(config, rec.seed);
        const NoiseProfile noise{rec.n1, rec.n2, config.sigma1_sq, config.sigma2_sq};
        const MixedDataset ds = generate_dataset(signal, noise, rec.seed);
        const double error_limit = 2.0 * config.delta * static_cast<double>(config.s);

        switch (config.decoder) {
            case DecoderKind::AgnosticScan:
            case DecoderKind::InformedMLE:
            case DecoderKind::LocalSearch: {
                decoders::DecodeResult res;
                if (config.decoder == DecoderKind::LocalSearch) {
                    res = decoders::decode_local_search(ds, config.s, config.local_objective,
                                                        config.restarts,
                                                        rng::derive_key(rec.seed, kSearchTag));
                } else {
                    const auto objective = config.decoder == DecoderKind::AgnosticScan
                                               ? decoders::Objective::Agnostic
                                               : decoders::Objective::Informed;
                    res = decoders::decode_exhaustive(ds, config.s, objective,
                                                      {config.candidate_cap, 1});
                }
                rec.error_count = support_error(res.support, signal.support());
                rec.recovered = static_cast<double>(rec.error_count) < error_limit;
                break;
            }
            case DecoderKind::Lasso: {
                lasso::LassoConfig lc;
                lc.lambda = lambda_for(config, noise);
                lc.tol = config.lasso_tol;
                lc.max_iter = config.lasso_max_iter;
                const auto sol = lasso::solve_lasso(ds, lc);
                const std::span<const double> beta(sol.beta.data(),
                                                   static_cast<std::size_t>(sol.beta.size()));
                rec.error_count = sign_mismatches(beta, signal, lc.zero_tol);
                rec.failed = !sol.converged;
                rec.recovered = sol.converged && rec.error_count == 0;
                break;
            }
        }
    } catch (const Error&) {
        rec.failed = true;
        rec.recovered = false;
        rec.error_count = std::numeric_limits<std::size_t>::max();
    }
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<TrialRecord> run_sweep(const ExperimentConfig& config, std::size_t threads) {
    config.validate();
    const std::size_t per = config.trials_per_point;
    const std::size_t total = config.grid.size() * per;
    std::vector<TrialRecord> records(total);
    parallel_for(total, threads, [&](std::size_t k) {
        records[k] = run_trial(config, k / per, k % per);
    });
    return records;
}

std::vector<SummaryRow> summarize(const ExperimentConfig& config,
                                  const std::vector<TrialRecord>& records) {
    const auto regime = planner::RegimeSpec::sublinear(config.p, config.s);
    const double n_star = planner::recovery_threshold(planner::ThresholdKind::NStar, regime);
    const double n_inf = config.s >= 2
                             ? planner::recovery_threshold(planner::ThresholdKind::NInf, regime)
                             : std::numeric_limits<double>::quiet_NaN();
    const double n_alg = planner::recovery_threshold(planner::ThresholdKind::NAlg, regime);

    struct Acc {
        std::size_t trials = 0;
        std::size_t recovered = 0;
        std::size_t scored = 0;
        double error_sum = 0.0;
    };
    std::vector<Acc> acc(config.grid.size());
    for (const auto& r : records) {
        if (r.point >= acc.size()) throw DomainError("trial record refers to an unknown grid point");
        Acc& a = acc[r.point];
        ++a.trials;
        if (r.recovered) ++a.recovered;
        if (r.error_count != std::numeric_limits<std::size_t>::max()) {
            ++a.scored;
            a.error_sum += static_cast<double>(r.error_count);
        }
    }

    std::vector<SummaryRow> rows;
    rows.reserve(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        const Acc& a = acc[k];
        SummaryRow row;
        row.n1 = config.grid[k].n1;
        row.n2 = config.grid[k].n2;
        row.n = row.n1 + row.n2;
        row.trials = a.trials;
        row.recovered = a.recovered;
        if (a.trials > 0) {
            row.recovery_rate = static_cast<double>(a.recovered) / static_cast<double>(a.trials);
            row.ci95 = stats::wilson95(a.recovered, a.trials).half_width();
        } else {
            row.recovery_rate = std::numeric_limits<double>::quiet_NaN();
            row.ci95 = std::numeric_limits<double>::quiet_NaN();
        }
        row.mean_error = a.scored > 0 ? a.error_sum / static_cast<double>(a.scored)
                                      : std::numeric_limits<double>::quiet_NaN();
        row.n_star = n_star;
        row.n_inf = n_inf;
        row.n_alg = n_alg;
        rows.push_back(row);
    }
    return rows;
}

std::set<Format> parse_formats(std::string_view list) {
    std::set<Format> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = std::min(list.find(',', start), list.size());
        const std::string_view item = list.substr(start, comma - start);
        if (item == "csv") {
            out.insert(Format::Csv);
        } else if (item == "svg") {
            out.insert(Format::Svg);
        } else if (!item.empty()) {
            throw DomainError("unknown output format '" + std::string(item) + "' (csv, svg)");
        }
        start = comma + 1;
    }
    if (out.empty()) throw DomainError("no output formats selected");
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& summary) {
    using io::format_decimal;
    std::string out = "n1,n2,n,trials,recovered,recovery_rate,ci95,mean_error,n_star,n_inf,n_alg\n";
    for (const auto& r : summary) {
        out += std::to_string(r.n1) + ',' + std::to_string(r.n2) + ',' + std::to_string(r.n) + ',' +
               std::to_string(r.trials) + ',' + std::to_string(r.recovered) + ',' +
               format_decimal(r.recovery_rate) + ',' + format_decimal(r.ci95) + ',' +
               format_decimal(r.mean_error) + ',' + format_decimal(r.n_star) + ',' +
               format_decimal(r.n_inf) + ',' + format_decimal(r.n_alg) + '\n';
    }
    return out;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
    std::string out = "n1,n2,trial,seed,recovered,error_count,wall_ms,failed\n";
    for (const auto& r : records) {
        const std::string err = r.error_count == std::numeric_limits<std::size_t>::max()
                                    ? std::string()
                                    : std::to_string(r.error_count);
        out += std::to_string(r.n1) + ',' + std::to_string(r.n2) + ',' + std::to_string(r.trial) +
               ',' + std::to_string(r.seed) + ',' + (r.recovered ? "1" : "0") + ',' + err + ',' +
               io::format_decimal(r.wall_ms) + ',' + (r.failed ? "1" : "0") + '\n';
    }
    return out;
}

std::string phase_svg(const std::vector<SummaryRow>& summary) {
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 400.0;
    constexpr double kLeft = 60.0;
    constexpr double kRight = 20.0;
    constexpr double kTop = 20.0;
    constexpr double kBottom = 50.0;

    std::vector<const SummaryRow*> rows;
    for (const auto& r : summary) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SummaryRow* a, const SummaryRow* b) { return a->n < b->n; });

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto* r : rows) {
        lo = std::min(lo, static_cast<double>(r->n));
        hi = std::max(hi, static_cast<double>(r->n));
    }
    std::vector<std::pair<std::string, double>> markers;
    if (!summary.empty()) {
        markers = {{"n*", summary.front().n_star},
                   {"n_INF", summary.front().n_inf},
                   {"n_ALG", summary.front().n_alg}};
    }
    for (const auto& [name, x] : markers) {
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi <= lo) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto px = [&](double n) { return kLeft + (n - lo) / (hi - lo) * plot_w; };
    const auto py = [&](double rate) { return kTop + (1.0 - rate) * plot_h; };
    const auto fmt = [](double v) {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os.precision(6);
        os << v;
        return os.str();
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
           fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(plot_w) +
           "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py(tick) + 4) +
               "\" text-anchor=\"end\">" + fmt(tick) + "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double n = lo + (hi - lo) * k / 4.0;
        svg += "<text x=\"" + fmt(px(n)) + "\" y=\"" + fmt(kHeight - kBottom + 16) +
               "\" text-anchor=\"middle\">" + fmt(std::round(n)) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 10) +
           "\" text-anchor=\"middle\">n = n1 + n2</text>\n";
    svg += "<text x=\"14\" y=\"" + fmt(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           fmt(kTop + plot_h / 2) + ")\">recovery rate</text>\n";

    const char* colours[] = {"#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t k = 0; k < markers.size(); ++k) {
        const double x = markers[k].second;
        if (!std::isfinite(x)) continue;
        svg += "<line x1=\"" + fmt(px(x)) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(px(x)) +
               "\" y2=\"" + fmt(kTop + plot_h) + "\" stroke=\"" + colours[k] +
               "\" stroke-dasharray=\"4 3\"/>\n";
        svg += "<text x=\"" + fmt(px(x) + 3) + "\" y=\"" + fmt(kTop + 12 + 14.0 * k) + "\" fill=\"" +
               colours[k] + "\">" + markers[k].first + "</text>\n";
    }

    if (!rows.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k) svg += ' ';
            svg += fmt(px(static_cast<double>(rows[k]->n))) + ',' + fmt(py(rows[k]->recovery_rate));
        }
        svg += "\"/>\n";
        for (const auto* r : rows) {
            svg += "<circle cx=\"" + fmt(px(static_cast<double>(r->n))) + "\" cy=\"" +
                   fmt(py(r->recovery_rate)) + "\" r=\"3\" fill=\"#1f77b4\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<fs::path> emit_outputs(const std::vector<SummaryRow>& summary,
                                   const std::vector<TrialRecord>& records,
                                   const fs::path& out_dir, const std::set<Format>& formats) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
    std::vector<fs::path> written;
    if (formats.count(Format::Csv)) {
        io::write_text_file(out_dir / "summary.csv", summary_csv(summary));
        written.push_back(out_dir / "summary.csv");
        io::write_text_file(out_dir / "trials.csv", trials_csv(records));
        written.push_back(out_dir / "trials.csv");
    }
    if (formats.count(Format::Svg)) {
        io::write_text_file(out_dir / "phase.svg", phase_svg(summary));
        written.push_back(out_dir / "phase.svg");
    }
    return written;
}

}  // namespace mqsr::harness
