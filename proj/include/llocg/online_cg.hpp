#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "llocg/local_linear_oracle.hpp"
#include "llocg/objectives.hpp"
#include "llocg/offline_cg.hpp"
#include "llocg/polytope.hpp"

namespace llocg {

/// Parameters of the bandit variant. Unset values take the defaults
///   delta = delta_scale * sqrt(r n C rho) / (sqrt(L) T^{1/4}),  shrink = delta / r,
/// with r, R from the polytope's origin balls unless given here.
struct BanditParams {
    double value_bound = 1.0;  ///< C: |f_t(x)| <= C on the polytope
    double lipschitz = 1.0;    ///< L
    std::optional<double> delta;
    std::optional<double> shrink;
    double delta_scale = 1.0;
    std::optional<double> inner_radius;
    std::optional<double> outer_radius;
};

struct OnlineConfig {
    int horizon = 1;
    /// G: bound on the l2 norm of loss gradients (full-information modes).
    double grad_bound = 1.0;
    /// H for the strongly convex mode; the stream's value is used when unset.
    std::optional<double> strong_convexity;
    /// General and bandit modes only.
    std::optional<double> epsilon;
    std::optional<double> eta;
    std::optional<double> alpha;
    /// Strongly convex mode only.
    std::optional<double> t0;
    /// rho is divided by this factor in every derived parameter (1 = theory).
    double aggressiveness = 1.0;
    BanditParams bandit;
    /// Seed for the bandit's sphere samples.
    std::uint64_t seed = 0;
};

struct RoundRecord {
    int t = 0;
    /// f_t at the played point.
    double loss = 0.0;
    /// Regret of the first t rounds; only tracked while every loss is linear.
    std::optional<double> regret;
    std::size_t support = 0;
    double radius = 0.0;
    long oracle_calls = 0;
};

struct RegretReport {
    double algorithm_loss = 0.0;
    double comparator_loss = 0.0;
    /// algorithm_loss - comparator_loss
    double regret = 0.0;
    Vec comparator;
    std::vector<RoundRecord> rounds;
    double seconds = 0.0;
    long oracle_calls = 0;

    // Parameters the run actually used.
    double rho = 0.0;
    double alpha = 0.0;
    double eta = 0.0;
    double epsilon = 0.0;
    double t0 = 0.0;
    double delta = 0.0;
    double shrink = 0.0;
    double grad_bound = 0.0;
};

/// What the algorithm saw and did in one round, passed to an observer.
struct RoundObservation {
    int t = 0;
    const Vec& iterate;      ///< x_t
    const Vec& played;       ///< point whose loss was incurred (x_t, or y_t in bandit mode)
    const Vec& feedback;     ///< grad f_t(x_t), or the one-point estimate g_t
    const Vec& gradient_sum; ///< sum of feedback vectors up to and including t
    const Vec& iterate_sum;  ///< sum of x_1..x_t
    const Vec& objective_gradient;  ///< grad F_t(x_t) passed to the LLO
};

using RoundObserver = std::function<void(const RoundObservation&)>;

/// Online conditional gradient for convex losses: each round feeds
/// grad F_t(x_t) = eta sum_{tau<=t} grad f_tau(x_tau) + 2 (x_t - x_1) to a single
/// LLO call with radius sqrt(eps) + eta G and blends with alpha = 1/(3 rho^2).
/// Defaults: eps = (D rho)^2 / sqrt(T), eta = sqrt(eps) / (18 G rho^2).
RegretReport oco_general(LossStream& stream, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                         const RoundObserver& observer = {});

/// Online conditional gradient for H-strongly convex losses, tracking
///   F_t(x) = sum_tau [grad f_tau(x_tau)^T x + H ||x - x_tau||^2] + H T0 ||x - x_1||^2
/// with alpha = 1/(5 rho^2), T0 = (25 rho^2)^2, L = G + 2 H D and radius
///   r_t = sqrt(eps_t / (H (t - 1 + T0))) + L / (H (t + T0)),
///   eps_t = (100 rho^2 L)^2 / (H (t - 1 + T0)).
RegretReport oco_strongly_convex(LossStream& stream, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                                 const RoundObserver& observer = {});

/// Bandit feedback: plays y_t = (1 - shrink) x_t + delta u_t with u_t uniform on
/// the unit sphere, sees only f_t(y_t), and runs the convex-loss update on
/// g_t = (n / delta) f_t(y_t) u_t with G = n C / delta.
/// Throws ArgumentError if the origin is not in the polytope and ConfigError
/// if delta > shrink * r or shrink >= 1.
RegretReport bandit_oco(LossStream& stream, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                        const RoundObserver& observer = {});

enum class OnlineMode { general, strongly_convex };

struct StochasticResult {
    /// (1/T) sum x_t
    Vec average;
    /// F(average of x_1..x_t) per round, when the expectation is known.
    RunTrace trace;
    RegretReport report;
};

/// Runs the matching online routine on i.i.d. samples and returns the average
/// iterate. `expected` is F = E f, used only for the trace; `f_star` enables gaps.
StochasticResult stochastic_minimize(LossStream& sampler, const LocalLinearOracle& llo, const OnlineConfig& cfg,
                                     OnlineMode mode, const std::optional<Objective>& expected = std::nullopt,
                                     std::optional<double> f_star = std::nullopt);

struct Comparator {
    Vec point;
    double loss = 0.0;
    /// Certified bound on loss - min, when the point comes from an iterative solve.
    std::optional<double> gap_bound;
};

/// Best fixed point in hindsight for the realized losses: one oracle call for
/// linear losses, the LLO solver for strongly convex sums (gap <= 1e-8), and
/// line-search Frank-Wolfe otherwise. Never touches an instrumented oracle.
Comparator compute_comparator(std::span<const Objective> losses, const Polytope& polytope);

/// Uniform direction on the unit sphere in R^n.
Vec sample_unit_sphere(std::mt19937_64& rng, int n);

/// 18 G D^2 rho^2 / sqrt(eps) + T G sqrt(eps) / (18 rho^2) + T G sqrt(eps) at eps = (D rho)^2 / sqrt(T).
double general_regret_bound(double grad_bound, double diameter, double rho, int horizon);

}  // namespace llocg
