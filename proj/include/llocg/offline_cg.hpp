#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "llocg/decomposition.hpp"
#include "llocg/local_linear_oracle.hpp"
#include "llocg/objectives.hpp"
#include "llocg/polytope.hpp"

namespace llocg {

/// How the LLO-based solver shrinks its radius.
///   lemma:  r_t^2 = (C / sigma) exp(-sigma / (4 beta rho^2) (t - 1))
///   algbox: r_t^2 = (C / sigma) exp(-alpha^2 (t - 1))
enum class RadiusSchedule { lemma, algbox };

RadiusSchedule parse_radius_schedule(const std::string& name);
std::string to_string(RadiusSchedule schedule);

struct OfflineConfig {
    int max_iters = 100;
    /// Upper bound on f(x_1) - f(x*). Defaults to ||grad f(x_1)|| * D when unset.
    std::optional<double> C;
    std::optional<double> alpha_override;
    /// Exact line search (Frank-Wolfe only).
    bool use_line_search = false;
    /// Re-decompose the iterate when its support exceeds the threshold.
    bool redecompose = false;
    /// k_max; when unset, default_redecompose_threshold() is used.
    std::optional<std::size_t> redecompose_threshold;
    RadiusSchedule radius_schedule = RadiusSchedule::lemma;
    /// Known optimal value; enables the gap column.
    std::optional<double> f_star;
    /// Stop once r_t < 1e-14.
    bool early_stop = false;
    /// Starting point; the polytope's initial vertex when unset.
    std::optional<ConvexDecomposition> start;
};

struct IterationRecord {
    int t = 0;
    /// x_{t+1}, the iterate after iteration t.
    Vec point;
    double value = 0.0;
    std::optional<double> gap;
    std::size_t support = 0;
    /// r_t (absent for Frank-Wolfe).
    std::optional<double> radius;
    /// Cumulative linear-oracle calls made by the main loop.
    long oracle_calls = 0;
    /// Cumulative calls spent on re-decomposition.
    long reduction_calls = 0;
};

struct RunTrace {
    std::vector<IterationRecord> records;
    double seconds = 0.0;
    std::optional<double> f_star;
    /// Initial-gap bound the radii were derived from (LLO solver only).
    double C = 0.0;
    /// LLO parameter the step size and radii were derived from.
    double rho = 0.0;
    double alpha = 0.0;
    std::size_t redecompose_threshold = 0;
    int reductions = 0;
    std::optional<ConvexDecomposition> final_iterate;

    long oracle_calls() const { return records.empty() ? 0 : records.back().oracle_calls; }
    long reduction_calls() const { return records.empty() ? 0 : records.back().reduction_calls; }
};

/// Conditional gradient with step 2/(t+2), or exact line search when requested.
/// Throws ArgumentError when beta <= 0.
RunTrace frank_wolfe(const Objective& obj, const Polytope& polytope, const OfflineConfig& cfg);

/// LLO-based conditional gradient for smooth, strongly convex objectives:
///   x_{t+1} = x_t + alpha (p_t - x_t),  alpha = sigma / (2 beta rho^2),
///   p_t = LLO(x_t, r_t, grad f(x_t)),
/// one linear-oracle call per iteration. When C >= f(x_1) - f*, the gap after
/// t iterations is at most C exp(-sigma / (4 beta n mu^2) t).
///
/// With re-decomposition on a non-simplex polytope rho is tripled.
RunTrace solve_smooth_strongly_convex(const Objective& obj, const LocalLinearOracle& llo,
                                      const OfflineConfig& cfg);

/// C exp(-sigma / (4 beta n mu^2) t)
double linear_rate_envelope(double C, double sigma, double beta, int n, double mu, int t);

/// True iff every recorded gap is within linear_rate_envelope (+1e-12).
/// Throws ArgumentError when the trace has no gaps.
bool certify_linear_rate(const RunTrace& trace, double C, double sigma, double beta, int n, double mu);

/// max(2(n+1), 64)
std::size_t default_redecompose_threshold(const Polytope& polytope);

}  // namespace llocg
