#pragma once

#include <cstddef>
#include <optional>

#include "llocg/decomposition.hpp"
#include "llocg/polytope.hpp"

namespace llocg {

struct LLOResult {
    ConvexDecomposition p;
    /// The one vertex returned by the linear oracle during this call.
    Vertex new_vertex;
    /// Total weight taken from the input decomposition and given to new_vertex.
    double mass_moved = 0.0;
};

/// Local linear oracle over a polytope, built from a single call to its
/// linear-optimization oracle per query.
///
/// For a query (x, r, c) the returned point p satisfies
///   c^T p <= c^T y  for every y in P with ||x - y|| <= r, and
///   ||x - p|| <= rho * r   with rho = sqrt(n) * mu.
class LocalLinearOracle {
public:
    explicit LocalLinearOracle(Polytope polytope) : polytope_(std::move(polytope)) {}

    LLOResult query(const ConvexDecomposition& x, double r, const Vec& c) const;

    double rho() const { return polytope_.rho(); }
    const Polytope& polytope() const { return polytope_; }

private:
    Polytope polytope_;
};

/// Throws ArgumentError for r <= 0, non-finite c or dimension mismatch, and
/// StateError when x.point() is not in the polytope (tol 1e-8).
LLOResult llo_query(const ConvexDecomposition& x, double r, const Vec& c, const Polytope& polytope);

/// Exact minimizer of c^T y over {y in simplex : ||x - y||_1 <= sqrt(n) r}:
/// moves min{sqrt(n) r / 2, 1} mass from the largest-cost coordinates onto the
/// cheapest one.
LLOResult llo_query_simplex(const Vec& x, double r, const Vec& c);

/// Decomposition of (1 - alpha) x + alpha p, alpha in (0, 1).
ConvexDecomposition blend(const ConvexDecomposition& x, const LLOResult& result, double alpha);

struct Reduction {
    ConvexDecomposition decomposition;
    long oracle_calls = 0;
    /// ||decomposition.point() - x||
    double distance = 0.0;
};

/// Number of inner iterations the approximate re-decomposition needs to reach
/// accuracy r_floor from any starting vertex (zero for the simplex, which is
/// reduced exactly).
std::size_t reduction_iteration_budget(const Polytope& polytope, double r_floor);

/// Re-expresses x with a small support.
///
/// Simplex: exact coordinate decomposition, no oracle calls.
/// Otherwise: minimizes ||y - x||^2 with the LLO-based solver until
/// ||y - x|| <= r_floor or the call budget is spent.
///   - without max_support: starts at the heaviest vertex of x and may spend
///     reduction_iteration_budget(r_floor) calls;
///   - with max_support = m: starts at the m/2 heaviest terms of x
///     (renormalized) and spends at most m - m/2 calls, so the result has at
///     most m vertices.
/// The distance actually reached is reported.
Reduction reduce_decomposition(const ConvexDecomposition& x, const Polytope& polytope, double r_floor,
                               std::optional<std::size_t> max_support = std::nullopt);

}  // namespace llocg
