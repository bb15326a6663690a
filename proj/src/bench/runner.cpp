#include "llocg/bench/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "llocg/errors.hpp"
#include "llocg/simplex_projection.hpp"

namespace llocg::bench {

namespace {

constexpr double kFeasibilityTol = 1e-8;

bool enabled(const ExperimentConfig& cfg, const std::string& name) {
    return std::find(cfg.certify.begin(), cfg.certify.end(), name) != cfg.certify.end();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::vector<TraceRow> offline_rows(const RunTrace& trace) {
    std::vector<TraceRow> rows;
    rows.reserve(trace.records.size());
    for (const auto& rec : trace.records) {
        rows.push_back({rec.t, rec.value, rec.gap, std::nullopt, rec.support, rec.radius,
                        rec.oracle_calls + rec.reduction_calls});
    }
    return rows;
}

std::vector<TraceRow> online_rows(const RegretReport& report) {
    std::vector<TraceRow> rows;
    rows.reserve(report.rounds.size());
    for (const auto& rec : report.rounds) {
        rows.push_back({rec.t, rec.loss, std::nullopt, rec.regret, rec.support, rec.radius, rec.oracle_calls});
    }
    return rows;
}

std::optional<double> resolve_f_star(const ExperimentConfig& cfg, const Objective& obj, const Polytope& polytope) {
    const SolverOptions& o = cfg.options;
    if (o.f_star) return o.f_star;
    if (cfg.objective->family == "lower_bound" && polytope.family() == Family::simplex) {
        return 1.0 / polytope.dim();
    }
    if (o.f_star_auto) {
        const std::vector<Objective> one{obj};
        return compute_comparator(one, polytope).loss;
    }
    return std::nullopt;
}

OnlineConfig online_config(const ExperimentConfig& cfg, std::uint64_t seed, double grad_bound) {
    const SolverOptions& o = cfg.options;
    OnlineConfig oc;
    oc.horizon = cfg.horizon;
    oc.grad_bound = grad_bound;
    oc.epsilon = o.epsilon;
    oc.eta = o.eta;
    oc.alpha = o.alpha;
    oc.t0 = o.t0;
    oc.aggressiveness = o.aggressiveness;
    oc.seed = seed;
    return oc;
}

void run_offline(const ExperimentConfig& cfg, const Polytope& instrumented, const OracleCounter& counter,
                 SeedResult& out) {
    const Polytope& polytope = instrumented;
    const Objective obj = build_objective(*cfg.objective, polytope.dim());
    const SolverOptions& o = cfg.options;
    OfflineConfig oc;
    oc.max_iters = cfg.horizon;
    oc.C = o.C;
    oc.alpha_override = o.alpha;
    oc.use_line_search = o.line_search;
    oc.redecompose = o.redecompose;
    oc.redecompose_threshold = o.redecompose_threshold;
    oc.radius_schedule = cfg.radius_schedule;
    oc.f_star = resolve_f_star(cfg, obj, polytope.without_instrumentation());

    const long before = counter->load();
    RunTrace trace = cfg.solver == Solver::frank_wolfe
                         ? frank_wolfe(obj, polytope, oc)
                         : solve_smooth_strongly_convex(obj, LocalLinearOracle(polytope), oc);
    const long used = counter->load() - before;

    out.rows = offline_rows(trace);
    out.iterations = static_cast<long>(trace.records.size());
    out.oracle_calls = used;
    if (!trace.records.empty()) {
        out.final_value = trace.records.back().value;
        out.final_gap = trace.records.back().gap;
    }
    if (enabled(cfg, "linear_rate")) {
        const double n = polytope.dim();
        const double mu_eff = trace.rho / std::sqrt(n);  // envelope exponent uses rho^2 = n mu^2
        out.certified["linear_rate"] =
            oc.f_star && certify_linear_rate(trace, trace.C, obj.sigma(), obj.beta(), polytope.dim(), mu_eff);
    }
    if (enabled(cfg, "oracle_budget")) {
        const bool approximate = o.redecompose && polytope.family() != Family::simplex;
        out.certified["oracle_budget"] =
            approximate ? used <= 2 * out.iterations : used == out.iterations;
    }
    if (enabled(cfg, "feasibility")) {
        bool ok = true;
        for (const auto& rec : trace.records) ok = ok && polytope.contains(rec.point, kFeasibilityTol);
        out.certified["feasibility"] = ok;
    }
}

void run_online(const ExperimentConfig& cfg, std::uint64_t seed, const Polytope& instrumented,
                const OracleCounter& counter, SeedResult& out) {
    const Polytope& polytope = instrumented;
    const int n = polytope.dim();
    const SolverOptions& o = cfg.options;
    const LocalLinearOracle llo(polytope);
    auto stream = build_stream(*cfg.stream, seed, n, cfg.horizon);
    const double radius = domain_radius(polytope);
    const double grad_bound = o.grad_bound.value_or(stream->gradient_bound(radius));
    OnlineConfig oc = online_config(cfg, seed, grad_bound);

    bool feasible = true;
    auto observer = [&](const RoundObservation& obs) {
        feasible = feasible && polytope.contains(obs.played, kFeasibilityTol);
    };

    const long before = counter->load();
    RegretReport report;
    switch (cfg.solver) {
        case Solver::oco_general:
            report = oco_general(*stream, llo, oc, observer);
            break;
        case Solver::oco_sc:
            report = oco_strongly_convex(*stream, llo, oc, observer);
            break;
        case Solver::bandit: {
            // Defaults valid for linear losses c^T x with ||c||_inf <= scale.
            const double lip = cfg.stream->scale * std::sqrt(static_cast<double>(n));
            if (cfg.stream->family != "linear" && (!o.value_bound || !o.lipschitz)) {
                throw ConfigError("solver bandit needs options.value_bound and options.lipschitz for stream " +
                                  cfg.stream->family);
            }
            oc.bandit.lipschitz = o.lipschitz.value_or(lip);
            oc.bandit.value_bound = o.value_bound.value_or(lip * radius);
            oc.bandit.delta_scale = o.delta_scale;
            oc.bandit.delta = o.delta;
            report = bandit_oco(*stream, llo, oc, observer);
            break;
        }
        case Solver::stochastic: {
            const bool linear = cfg.stream->family == "noisy_linear";
            std::optional<Objective> expected;
            if (linear) {
                expected = make_linear(cfg.stream->mean);
            } else {
                std::vector<Objective> parts;
                const double w = cfg.stream->h / static_cast<double>(cfg.stream->points.size());
                for (const auto& p : cfg.stream->points) parts.push_back(make_squared_distance(p, w));
                expected = sum_objectives(parts);
            }
            const std::vector<Objective> one{*expected};
            const double f_star = o.f_star.value_or(compute_comparator(one, polytope).loss);
            StochasticResult res = stochastic_minimize(*stream, llo, oc,
                                                       linear ? OnlineMode::general : OnlineMode::strongly_convex,
                                                       expected, f_star);
            report = std::move(res.report);
            const long used = counter->load() - before;
            for (std::size_t i = 0; i < res.trace.records.size(); ++i) {
                const auto& rec = res.trace.records[i];
                const auto& round = report.rounds[i];
                out.rows.push_back({rec.t, rec.value, rec.gap, std::nullopt, round.support, round.radius,
                                    round.oracle_calls});
            }
            out.iterations = cfg.horizon;
            out.oracle_calls = used;
            out.final_value = res.trace.records.back().value;
            out.final_gap = res.trace.records.back().gap;
            out.final_regret = report.regret;
            if (enabled(cfg, "oracle_budget")) out.certified["oracle_budget"] = used == out.iterations;
            if (enabled(cfg, "feasibility")) {
                out.certified["feasibility"] = polytope.contains(res.average, kFeasibilityTol);
            }
            return;
        }
        default:
            throw ConfigError("solver " + to_string(cfg.solver) + " is not an online solver");
    }
    const long used = counter->load() - before;

    out.rows = online_rows(report);
    out.iterations = cfg.horizon;
    out.oracle_calls = used;
    out.final_value = report.algorithm_loss;
    out.final_regret = report.regret;
    if (cfg.solver == Solver::oco_general) {
        out.regret_bound = general_regret_bound(grad_bound, polytope.diameter(), report.rho, cfg.horizon);
    }
    if (enabled(cfg, "regret_bound")) out.certified["regret_bound"] = report.regret <= *out.regret_bound;
    if (enabled(cfg, "oracle_budget")) out.certified["oracle_budget"] = used == out.iterations;
    if (enabled(cfg, "feasibility")) out.certified["feasibility"] = feasible;

    if (cfg.baseline) {
        auto fresh = build_stream(*cfg.stream, seed, n, cfg.horizon);
        RegretReport base =
            projected_subgradient_baseline(*fresh, polytope.without_instrumentation(), cfg.horizon, grad_bound);
        out.baseline_regret = base.regret;
        out.baseline_rows = online_rows(base);
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

bool SummaryReport::all_certified() const {
    for (const auto& s : seeds) {
        for (const auto& [name, ok] : s.certified) {
            if (!ok) return false;
        }
    }
    return true;
}

SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const Polytope base = build_polytope(cfg.polytope);
    auto [polytope, counter] = instrument(base);
    SeedResult out;
    out.seed = seed;
    if (cfg.solver == Solver::frank_wolfe || cfg.solver == Solver::llo_cg) {
        run_offline(cfg, polytope, counter, out);
    } else {
        run_online(cfg, seed, polytope, counter, out);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string format_trace_csv(const std::vector<TraceRow>& rows) {
    std::ostringstream out;
    out << "t,value,gap,regret,support,radius,oracle_calls\n";
    for (const auto& r : rows) {
        out << r.t << ',' << fmt(r.value) << ',' << fmt(r.gap) << ',' << fmt(r.regret) << ',' << r.support << ','
            << fmt(r.radius) << ',' << r.oracle_calls << '\n';
    }
    return out.str();
}

std::string format_summary_csv(const SummaryReport& report, const std::vector<std::string>& certify) {
    std::ostringstream out;
    out << "seed,iterations,final_value,final_gap,final_regret,regret_bound,oracle_calls,baseline_regret";
    for (const auto& c : certify) out << ",certified_" << c;
    out << '\n';
    for (const auto& s : report.seeds) {
        out << s.seed << ',' << s.iterations << ',' << fmt(s.final_value) << ',' << fmt(s.final_gap) << ','
            << fmt(s.final_regret) << ',' << fmt(s.regret_bound) << ',' << s.oracle_calls << ','
            << fmt(s.baseline_regret);
        for (const auto& c : certify) {
            auto it = s.certified.find(c);
            out << ',' << (it == s.certified.end() ? "" : (it->second ? "true" : "false"));
        }
        out << '\n';
    }
    return out.str();
}

SummaryReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    ExperimentConfig cfg = config;
    if (options.radius_schedule) cfg.radius_schedule = *options.radius_schedule;

    const auto start = std::chrono::steady_clock::now();
    if (options.output_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*options.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + options.output_dir->string() + "': " + ec.message());
    }
    // Fail on bad polytope/objective data before spawning workers.
    (void)build_polytope(cfg.polytope);

    SummaryReport report;
    report.name = cfg.name;
    report.seeds.resize(cfg.seeds.size());

    unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(cfg.seeds.size()));

    std::atomic<std::size_t> next{0};
    std::mutex write_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
            try {
                SeedResult res = run_seed(cfg, cfg.seeds[i]);
                std::lock_guard lock(write_mutex);
                if (failure) return;
                if (options.output_dir) {
                    const std::string stem = cfg.name + "_trace_seed" + std::to_string(res.seed) + ".csv";
                    write_file(*options.output_dir / stem, format_trace_csv(res.rows));
                    if (cfg.baseline) {
                        const std::string b = cfg.name + "_baseline_trace_seed" + std::to_string(res.seed) + ".csv";
                        write_file(*options.output_dir / b, format_trace_csv(res.baseline_rows));
                    }
                }
                report.seeds[i] = std::move(res);
            } catch (...) {
                std::lock_guard lock(write_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    if (options.output_dir) {
        write_file(*options.output_dir / (cfg.name + "_summary.csv"), format_summary_csv(report, cfg.certify));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace llocg::bench
