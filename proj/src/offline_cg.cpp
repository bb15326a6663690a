#include "llocg/offline_cg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "llocg/errors.hpp"

namespace llocg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

IterationRecord make_record(int t, const Objective& obj, const ConvexDecomposition& x,
                            const std::optional<double>& f_star) {
    IterationRecord rec;
    rec.t = t;
    rec.point = x.point();
    rec.value = obj.value(x.point());
    if (f_star) rec.gap = rec.value - *f_star;
    rec.support = x.support_size();
    return rec;
}

// Exact minimizer of f(x + a d) over a in [0, 1] by bisection on the derivative.
double line_search(const Objective& obj, const Vec& x, const Vec& d) {
    auto slope = [&](double a) { return obj.gradient(x + a * d).dot(d); };
    if (slope(0.0) >= 0.0) return 0.0;
    if (slope(1.0) <= 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 100 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) < 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

ConvexDecomposition starting_point(const Polytope& polytope, const OfflineConfig& cfg) {
    if (cfg.start) {
        if (cfg.start->dim() != polytope.dim()) throw ArgumentError("solver: start has wrong dimension");
        return *cfg.start;
    }
    return ConvexDecomposition::from_vertex(polytope.initial_vertex());
}

}  // namespace

RadiusSchedule parse_radius_schedule(const std::string& name) {
    if (name == "lemma") return RadiusSchedule::lemma;
    if (name == "algbox") return RadiusSchedule::algbox;
    throw ArgumentError("unknown radius schedule '" + name + "' (expected lemma or algbox)");
}

std::string to_string(RadiusSchedule schedule) {
    return schedule == RadiusSchedule::lemma ? "lemma" : "algbox";
}

RunTrace frank_wolfe(const Objective& obj, const Polytope& polytope, const OfflineConfig& cfg) {
    if (!(obj.beta() > 0.0)) throw ArgumentError("frank_wolfe: objective must have beta > 0");
    if (obj.dim() != polytope.dim()) throw ArgumentError("frank_wolfe: dimension mismatch");
    if (cfg.max_iters < 1) throw ArgumentError("frank_wolfe: max_iters must be at least 1");

    const auto start = Clock::now();
    RunTrace trace;
    trace.f_star = cfg.f_star;
    ConvexDecomposition x = starting_point(polytope, cfg);
    long calls = 0;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        const Vec g = obj.gradient(x.point());
        ConvexDecomposition p = ConvexDecomposition::from_vertex(polytope.minimize_linear(g));
        ++calls;
        double step = 2.0 / (t + 2.0);
        if (cfg.alpha_override) step = *cfg.alpha_override;
        if (cfg.use_line_search) step = line_search(obj, x.point(), p.point() - x.point());
        x = mix(x, p, step);
        IterationRecord rec = make_record(t, obj, x, cfg.f_star);
        rec.oracle_calls = calls;
        trace.records.push_back(std::move(rec));
    }
    trace.final_iterate = x;
    trace.seconds = seconds_since(start);
    return trace;
}

std::size_t default_redecompose_threshold(const Polytope& polytope) {
    return std::max<std::size_t>(2 * (static_cast<std::size_t>(polytope.dim()) + 1), 64);
}

RunTrace solve_smooth_strongly_convex(const Objective& obj, const LocalLinearOracle& llo,
                                      const OfflineConfig& cfg) {
    const Polytope& polytope = llo.polytope();
    if (!(obj.sigma() > 0.0)) throw ArgumentError("llo solver: objective must have sigma > 0");
    if (obj.dim() != polytope.dim()) throw ArgumentError("llo solver: dimension mismatch");
    if (cfg.max_iters < 1) throw ArgumentError("llo solver: max_iters must be at least 1");
    const double beta = obj.beta();
    const double sigma = obj.sigma();
    ConvexDecomposition x = starting_point(polytope, cfg);
    // f(x_1) - f* <= grad f(x_1)^T (x_1 - x*) <= ||grad f(x_1)|| D by convexity.
    double C = cfg.C ? *cfg.C : obj.gradient(x.point()).norm() * polytope.diameter();
    if (!cfg.C && C == 0.0) C = 1e-300;  // x_1 is already optimal
    if (!(C > 0.0) || !std::isfinite(C)) throw ArgumentError("llo solver: C must be positive");

    const bool approximate_reduction = cfg.redecompose && polytope.family() != Family::simplex;
    const double rho = approximate_reduction ? 3.0 * llo.rho() : llo.rho();
    const double alpha = cfg.alpha_override.value_or(sigma / (2.0 * beta * rho * rho));
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("llo solver: step size must lie in (0, 1)");
    const double decay = cfg.radius_schedule == RadiusSchedule::lemma ? sigma / (4.0 * beta * rho * rho)
                                                                      : alpha * alpha;
    const double diameter = polytope.diameter();
    auto radius = [&](int t) { return std::min(std::sqrt(C / sigma * std::exp(-decay * (t - 1))), diameter); };

    const auto start = Clock::now();
    RunTrace trace;
    trace.f_star = cfg.f_star;
    trace.C = C;
    trace.rho = rho;
    trace.alpha = alpha;
    trace.redecompose_threshold =
        cfg.redecompose_threshold.value_or(default_redecompose_threshold(polytope));
    if (cfg.redecompose && trace.redecompose_threshold < 4) {
        throw ConfigError("llo solver: redecompose_threshold must be at least 4");
    }
    // Reductions shrink the support to k_max / 2 using at most k_max / 4 calls;
    // support grows by at most one per iteration, so the next reduction is at
    // least k_max / 2 iterations away and the amortized cost stays below 2.
    const std::size_t reduced_support = trace.redecompose_threshold / 2;

    long calls = 0;
    long reduction_calls = 0;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        const double r = radius(t);
        if (cfg.early_stop && r < 1e-14) break;
        double query_radius = r;
        if (cfg.redecompose && x.support_size() > trace.redecompose_threshold) {
            Reduction red = reduce_decomposition(x, polytope, alpha * r, reduced_support);
            reduction_calls += red.oracle_calls;
            ++trace.reductions;
            x = std::move(red.decomposition);
            // The reduced point is red.distance away from the old one, so this
            // ball around it covers the old ball.
            query_radius = r + red.distance;
        }
        LLOResult step = llo.query(x, query_radius, obj.gradient(x.point()));
        ++calls;
        x = blend(x, step, alpha);
        IterationRecord rec = make_record(t, obj, x, cfg.f_star);
        rec.radius = r;
        rec.oracle_calls = calls;
        rec.reduction_calls = reduction_calls;
        trace.records.push_back(std::move(rec));
    }
    trace.final_iterate = x;
    trace.seconds = seconds_since(start);
    return trace;
}

double linear_rate_envelope(double C, double sigma, double beta, int n, double mu, int t) {
    return C * std::exp(-sigma / (4.0 * beta * n * mu * mu) * t);
}

bool certify_linear_rate(const RunTrace& trace, double C, double sigma, double beta, int n, double mu) {
    if (trace.records.empty()) throw ArgumentError("certify_linear_rate: empty trace");
    for (const auto& rec : trace.records) {
        if (!rec.gap) throw ArgumentError("certify_linear_rate: trace has no known optimum");
        if (*rec.gap > linear_rate_envelope(C, sigma, beta, n, mu, rec.t) + 1e-12) return false;
    }
    return true;
}

}  // namespace llocg
