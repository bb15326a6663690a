#pragma once

#include <cstddef>
#include <vector>

#include "llocg/polytope.hpp"

namespace llocg {

struct DecompositionTerm {
    Vertex vertex;
    double weight = 0.0;
};

/// A point stored as a convex combination of polytope vertices.
///
/// Terms are kept sorted by vertex id with no duplicates, every weight is at
/// least `kPruneThreshold`, and the weights sum to one. The cached point is
/// recomputed from the terms on every construction.
class ConvexDecomposition {
public:
    static constexpr double kPruneThreshold = 1e-12;

    /// Merges duplicate ids, drops weights below the prune threshold and
    /// renormalizes. Throws ArgumentError on negative or non-finite weights,
    /// mismatched dimensions, or when no weight survives.
    explicit ConvexDecomposition(std::vector<DecompositionTerm> terms);

    static ConvexDecomposition from_vertex(Vertex v);

    const std::vector<DecompositionTerm>& terms() const { return terms_; }
    const Vec& point() const { return point_; }
    std::size_t support_size() const { return terms_.size(); }
    int dim() const { return static_cast<int>(point_.size()); }

    /// Index of the largest weight (first on ties).
    std::size_t heaviest() const;

private:
    ConvexDecomposition() = default;
    void finalize();

    std::vector<DecompositionTerm> terms_;
    Vec point_;
};

/// Decomposition of (1 - alpha) a + alpha b for alpha in [0, 1].
ConvexDecomposition mix(const ConvexDecomposition& a, const ConvexDecomposition& b, double alpha);

}  // namespace llocg
