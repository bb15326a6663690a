#pragma once

#include "llocg/objectives.hpp"
#include "llocg/online_cg.hpp"
#include "llocg/polytope.hpp"

namespace llocg {

/// Euclidean projection onto the probability simplex (sort-based, O(n log n)).
Vec project_to_simplex(const Vec& y);

/// Online projected gradient descent on the simplex with step D / (G sqrt(t)),
/// starting from the polytope's initial vertex. A comparison baseline only.
/// Throws ArgumentError when the polytope is not a simplex.
RegretReport projected_subgradient_baseline(LossStream& stream, const Polytope& simplex, int horizon,
                                            double grad_bound);

}  // namespace llocg
