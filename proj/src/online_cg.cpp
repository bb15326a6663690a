#include "llocg/online_cg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "llocg/errors.hpp"

namespace llocg {

namespace {

using Clock = std::chrono::steady_clock;

struct Feedback {
    Vec played;
    double loss = 0.0;
    Vec vector;  // gradient or its estimate
};

// Everything a round needs beyond the shared bookkeeping.
struct RoundRule {
    double alpha = 0.0;
    std::function<double(int)> radius;
    std::function<Feedback(const Objective&, const Vec&)> feedback;
    // grad F_t(x_t) from t, x_t and the running sums (which include round t).
    std::function<Vec(int, const Vec&, const Vec&, const Vec&)> objective_gradient;
};

void check_common(const LossStream& stream, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                  const char* who) {
    if (cfg.horizon < 1) throw ArgumentError(std::string(who) + ": horizon must be at least 1");
    if (stream.horizon() < cfg.horizon) throw ArgumentError(std::string(who) + ": stream is shorter than the horizon");
    if (!(cfg.aggressiveness > 0.0) || !std::isfinite(cfg.aggressiveness)) {
        throw ArgumentError(std::string(who) + ": aggressiveness must be positive");
    }
    (void)llo;
}

double effective_rho(const LocalLinearOracle& llo, const OnlineConfig& cfg) {
    return llo.rho() / cfg.aggressiveness;
}

void check_alpha(double alpha, const char* who) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(std::string(who) + ": step alpha must lie in (0, 1)");
}

// Shared round loop: play, observe, update sums, one LLO call, blend.
RegretReport drive(LossStream& stream, const LocalLinearOracle& llo, int horizon, const RoundRule& rule,
                   const RoundObserver& observer) {
    const auto start = Clock::now();
    const Polytope& polytope = llo.polytope();
    const Polytope eval = polytope.without_instrumentation();
    const int n = polytope.dim();

    ConvexDecomposition x = ConvexDecomposition::from_vertex(polytope.initial_vertex());
    const Vec x1 = x.point();
    Vec grad_sum = Vec::Zero(n);
    Vec iter_sum = Vec::Zero(n);

    // Prefix regret for linear losses: min over P of the summed coefficients.
    bool all_linear = true;
    Vec coef_sum = Vec::Zero(n);

    RegretReport report;
    report.rounds.reserve(static_cast<std::size_t>(horizon));
    std::vector<Objective> losses;
    losses.reserve(static_cast<std::size_t>(horizon));
    long calls = 0;
    double cumulative = 0.0;

    for (int t = 1; t <= horizon; ++t) {
        const Vec xt = x.point();
        Objective loss = stream.next(t, xt);
        if (loss.dim() != n) throw ArgumentError("online: loss dimension does not match the polytope");
        Feedback fb = rule.feedback(loss, xt);
        cumulative += fb.loss;
        grad_sum += fb.vector;
        iter_sum += xt;
        const Vec gradient = rule.objective_gradient(t, xt, grad_sum, iter_sum);

        RoundRecord rec;
        rec.t = t;
        rec.loss = fb.loss;
        rec.support = x.support_size();
        rec.radius = rule.radius(t);
        if (all_linear && loss.linear_coefficients()) {
            coef_sum += *loss.linear_coefficients();
            rec.regret = cumulative - eval.minimize_linear(coef_sum).coords.dot(coef_sum);
        } else {
            all_linear = false;
        }

        if (observer) observer(RoundObservation{t, xt, fb.played, fb.vector, grad_sum, iter_sum, gradient});

        LLOResult step = llo.query(x, rec.radius, gradient);
        ++calls;
        x = blend(x, step, rule.alpha);
        rec.oracle_calls = calls;
        report.rounds.push_back(std::move(rec));
        losses.push_back(std::move(loss));
    }

    Comparator best = compute_comparator(losses, polytope);
    report.algorithm_loss = cumulative;
    report.comparator_loss = best.loss;
    report.regret = cumulative - best.loss;
    report.comparator = std::move(best.point);
    report.oracle_calls = calls;
    report.alpha = rule.alpha;
    report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

struct GeneralParams {
    double epsilon;
    double eta;
    double alpha;
    double radius;
};

GeneralParams general_params(const Polytope& polytope, double rho, double grad_bound, const OnlineConfig& cfg) {
    const double d = polytope.diameter();
    GeneralParams p{};
    p.epsilon = cfg.epsilon.value_or((d * rho) * (d * rho) / std::sqrt(static_cast<double>(cfg.horizon)));
    p.eta = cfg.eta.value_or(std::sqrt(p.epsilon) / (18.0 * grad_bound * rho * rho));
    p.alpha = cfg.alpha.value_or(1.0 / (3.0 * rho * rho));
    p.radius = std::sqrt(p.epsilon) + p.eta * grad_bound;
    if (!(p.epsilon > 0.0) || !(p.eta > 0.0) || !std::isfinite(p.radius)) {
        throw ConfigError("online: epsilon and eta must be positive");
    }
    check_alpha(p.alpha, "online");
    return p;
}

RoundRule general_rule(const GeneralParams& p, const Vec& x1) {
    RoundRule rule;
    rule.alpha = p.alpha;
    rule.radius = [r = p.radius](int) { return r; };
    rule.objective_gradient = [eta = p.eta, x1](int, const Vec& xt, const Vec& grad_sum, const Vec&) -> Vec {
        return eta * grad_sum + 2.0 * (xt - x1);
    };
    return rule;
}

}  // namespace

RegretReport oco_general(LossStream& stream, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                         const RoundObserver& observer) {
    check_common(stream, llo, cfg, "oco_general");
    if (!(cfg.grad_bound > 0.0) || !std::isfinite(cfg.grad_bound)) {
        throw ArgumentError("oco_general: grad_bound must be positive");
    }
    const Polytope& polytope = llo.polytope();
    const double rho = effective_rho(llo, cfg);
    const GeneralParams p = general_params(polytope, rho, cfg.grad_bound, cfg);

    RoundRule rule = general_rule(p, polytope.initial_vertex().coords);
    rule.feedback = [](const Objective& loss, const Vec& xt) {
        return Feedback{xt, loss.value(xt), loss.gradient(xt)};
    };
    RegretReport report = drive(stream, llo, cfg.horizon, rule, observer);
    report.rho = rho;
    report.eta = p.eta;
    report.epsilon = p.epsilon;
    report.grad_bound = cfg.grad_bound;
    return report;
}

RegretReport oco_strongly_convex(LossStream& stream, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                                 const RoundObserver& observer) {
    check_common(stream, llo, cfg, "oco_strongly_convex");
    const double h = cfg.strong_convexity.value_or(stream.strong_convexity());
    if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("oco_strongly_convex: H must be positive");
    if (!(cfg.grad_bound > 0.0) || !std::isfinite(cfg.grad_bound)) {
        throw ArgumentError("oco_strongly_convex: grad_bound must be positive");
    }
    const Polytope& polytope = llo.polytope();
    const double rho = effective_rho(llo, cfg);
    const double rho2 = rho * rho;
    const double alpha = cfg.alpha.value_or(1.0 / (5.0 * rho2));
    check_alpha(alpha, "oco_strongly_convex");
    const double t0 = cfg.t0.value_or((25.0 * rho2) * (25.0 * rho2));
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw ConfigError("oco_strongly_convex: T0 must be positive");
    const double lip = cfg.grad_bound + 2.0 * h * polytope.diameter();

    RoundRule rule;
    rule.alpha = alpha;
    rule.radius = [=](int t) {
        const double m = h * (t - 1 + t0);
        const double eps_t = (100.0 * rho2 * lip) * (100.0 * rho2 * lip) / m;
        return std::sqrt(eps_t / m) + lip / (h * (t + t0));
    };
    rule.feedback = [](const Objective& loss, const Vec& xt) {
        return Feedback{xt, loss.value(xt), loss.gradient(xt)};
    };
    const Vec x1 = polytope.initial_vertex().coords;
    rule.objective_gradient = [=](int t, const Vec& xt, const Vec& grad_sum, const Vec& iter_sum) -> Vec {
        return grad_sum + 2.0 * h * (t * xt - iter_sum) + 2.0 * h * t0 * (xt - x1);
    };
    RegretReport report = drive(stream, llo, cfg.horizon, rule, observer);
    report.rho = rho;
    report.t0 = t0;
    report.grad_bound = cfg.grad_bound;
    return report;
}

RegretReport bandit_oco(LossStream& stream, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                        const RoundObserver& observer) {
    check_common(stream, llo, cfg, "bandit_oco");
    const Polytope& polytope = llo.polytope();
    const int n = polytope.dim();
    if (!polytope.contains(Vec::Zero(n), 1e-12)) throw ArgumentError("bandit_oco: origin is not in the polytope");
    const BanditParams& b = cfg.bandit;
    std::optional<double> inner = b.inner_radius;
    if (!inner && polytope.origin_balls()) inner = polytope.origin_balls()->inner;
    if (!inner || !(*inner > 0.0)) throw ArgumentError("bandit_oco: inner radius r must be known and positive");
    if (!(b.value_bound > 0.0) || !(b.lipschitz > 0.0) || !(b.delta_scale > 0.0)) {
        throw ArgumentError("bandit_oco: value bound, Lipschitz constant and delta scale must be positive");
    }

    const double rho = effective_rho(llo, cfg);
    const double r = *inner;
    const double delta = b.delta.value_or(b.delta_scale * std::sqrt(r * n * b.value_bound * rho) /
                                          (std::sqrt(b.lipschitz) * std::pow(cfg.horizon, 0.25)));
    const double shrink = b.shrink.value_or(delta / r);
    if (!(delta > 0.0)) throw ConfigError("bandit_oco: delta must be positive");
    if (!(shrink > 0.0 && shrink < 1.0)) {
        throw ConfigError("bandit_oco: shrink factor must lie in (0, 1); lower delta_scale or raise the horizon");
    }
    if (delta > shrink * r * (1.0 + 1e-12)) throw ConfigError("bandit_oco: delta exceeds shrink * r");

    const double grad_bound = n * b.value_bound / delta;
    const GeneralParams p = general_params(polytope, rho, grad_bound, cfg);

    std::mt19937_64 rng(cfg.seed);
    RoundRule rule = general_rule(p, polytope.initial_vertex().coords);
    rule.feedback = [&rng, n, delta, shrink](const Objective& loss, const Vec& xt) {
        const Vec u = sample_unit_sphere(rng, n);
        Vec y = (1.0 - shrink) * xt + delta * u;
        const double value = loss.value(y);
        return Feedback{std::move(y), value, (n / delta) * value * u};
    };
    RegretReport report = drive(stream, llo, cfg.horizon, rule, observer);
    report.rho = rho;
    report.eta = p.eta;
    report.epsilon = p.epsilon;
    report.delta = delta;
    report.shrink = shrink;
    report.grad_bound = grad_bound;
    return report;
}

StochasticResult stochastic_minimize(LossStream& sampler, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                                     OnlineMode mode, const std::optional<Objective>& expected,
                                     std::optional<double> f_star) {
    StochasticResult out;
    out.trace.f_star = f_star;
    auto observer = [&](const RoundObservation& obs) {
        if (!expected) return;
        IterationRecord rec;
        rec.t = obs.t;
        rec.point = obs.iterate_sum / obs.t;
        rec.value = expected->value(rec.point);
        if (f_star) rec.gap = rec.value - *f_star;
        rec.oracle_calls = obs.t;
        out.trace.records.push_back(std::move(rec));
    };
    Vec iter_sum;
    auto tracking = [&](const RoundObservation& obs) {
        iter_sum = obs.iterate_sum;
        observer(obs);
    };
    out.report = mode == OnlineMode::general ? oco_general(sampler, llo, cfg, tracking)
                                             : oco_strongly_convex(sampler, llo, cfg, tracking);
    out.average = iter_sum / cfg.horizon;
    out.trace.rho = out.report.rho;
    out.trace.alpha = out.report.alpha;
    out.trace.seconds = out.report.seconds;
    return out;
}

Comparator compute_comparator(std::span<const Objective> losses, const Polytope& polytope) {
    if (losses.empty()) throw ArgumentError("compute_comparator: no losses");
    const Polytope eval = polytope.without_instrumentation();
    auto total = [&](const Vec& x) {
        double s = 0.0;
        for (const auto& f : losses) s += f.value(x);
        return s;
    };

    bool linear = true;
    Vec coef = Vec::Zero(polytope.dim());
    for (const auto& f : losses) {
        if (!f.linear_coefficients()) {
            linear = false;
            break;
        }
        coef += *f.linear_coefficients();
    }
    Comparator best;
    if (linear) {
        best.point = eval.minimize_linear(coef).coords;
        best.loss = total(best.point);
        return best;
    }

    const Objective sum = sum_objectives(losses);
    OfflineConfig oc;
    if (sum.sigma() > 0.0) {
        const Vec x1 = eval.initial_vertex().coords;
        const double C = std::max(sum.gradient(x1).norm() * eval.diameter(), 1e-300);
        const double rate = sum.sigma() / (4.0 * sum.beta() * eval.dim() * eval.mu() * eval.mu());
        const double iters = std::ceil(std::log(std::max(C / 1e-8, 1.0)) / rate);
        oc.max_iters = static_cast<int>(std::clamp(iters, 1.0, 1e6));
        oc.C = C;
        RunTrace trace = solve_smooth_strongly_convex(sum, LocalLinearOracle(eval), oc);
        best.point = trace.final_iterate->point();
        best.gap_bound = linear_rate_envelope(C, sum.sigma(), sum.beta(), eval.dim(), eval.mu(), oc.max_iters);
    } else {
        oc.max_iters = 5000;
        oc.use_line_search = true;
        RunTrace trace = frank_wolfe(sum.beta() > 0.0 ? sum : sum.with_curvature(1.0, 0.0), eval, oc);
        best.point = trace.final_iterate->point();
    }
    best.loss = total(best.point);
    return best;
}

Vec sample_unit_sphere(std::mt19937_64& rng, int n) {
    if (n < 1) throw ArgumentError("sample_unit_sphere: n must be at least 1");
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec u(n);
    double norm = 0.0;
    while (!(norm > 0.0)) {
        for (int i = 0; i < n; ++i) u(i) = normal(rng);
        norm = u.norm();
    }
    return u / norm;
}

double general_regret_bound(double grad_bound, double diameter, double rho, int horizon) {
    const double T = horizon;
    const double eps = (diameter * rho) * (diameter * rho) / std::sqrt(T);
    const double se = std::sqrt(eps);
    const double rho2 = rho * rho;
    return 18.0 * grad_bound * diameter * diameter * rho2 / se + T * grad_bound * se / (18.0 * rho2) +
           T * grad_bound * se;
}

}  // namespace llocg
