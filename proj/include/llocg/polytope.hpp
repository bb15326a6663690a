#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace llocg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Canonical, family-specific vertex identifier. Ordering is lexicographic and
/// drives every tie-break in the library.
using VertexId = std::vector<std::int64_t>;

struct Vertex {
    Vec coords;
    VertexId id;
};

enum class Family { simplex, hypercube, flow_dag, centered_simplex, custom };

std::string to_string(Family family);

/// Geometric constants of a polytope {x : A1 x = b1, A2 x <= b2}.
///   diameter  D  = max Euclidean distance between two points of P
///   xi           = smallest positive slack b2(j) - A2(j) v over vertices v
///   psi          = largest spectral norm of a full-rank row submatrix of A2
struct GeometricConstants {
    double diameter = 0.0;
    double xi = 0.0;
    double psi = 0.0;
};

/// Radii r, R with rB ⊆ P ⊆ RB around the origin (only for polytopes that
/// contain the origin in their interior).
struct OriginBalls {
    double inner = 0.0;
    double outer = 0.0;
};

using LinearOracle = std::function<Vertex(const Vec&)>;

/// Directed acyclic graph whose source->sink paths are the vertices of a flow
/// polytope. Coordinates of the polytope are indexed by edge position.
class DagGraph {
public:
    /// Throws ArgumentError when the graph has a cycle, an out-of-range
    /// endpoint, or a node that lies on no source->sink path.
    DagGraph(int node_count, std::vector<std::pair<int, int>> edges, int source, int sink);

    /// Parses `src dst` pairs, one per line. Nodes are 0..k-1 with k inferred
    /// from the largest index; node 0 is the source and node k-1 the sink.
    /// Blank lines and lines starting with '#' are skipped.
    static DagGraph parse(std::istream& in);
    static DagGraph read_file(const std::string& path);

    int node_count() const { return node_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int source() const { return source_; }
    int sink() const { return sink_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& topological_order() const { return topo_; }
    const std::vector<std::vector<int>>& out_edges() const { return out_; }

    /// Number of source->sink paths (as a double, it can be astronomically large).
    double path_count() const;
    /// Edge count of the longest source->sink path.
    int longest_path_edges() const;
    /// Every source->sink path as a list of edge indices in traversal order.
    /// Throws ArgumentError if more than `limit` paths exist.
    std::vector<std::vector<int>> enumerate_paths(std::size_t limit = 100000) const;

private:
    int node_count_;
    std::vector<std::pair<int, int>> edges_;
    int source_;
    int sink_;
    std::vector<int> topo_;
    std::vector<std::vector<int>> out_;
};

/// A polytope in H-representation together with its geometric constants and a
/// linear-optimization oracle returning a minimizing vertex.
///
/// Instances are immutable; the oracle must be a pure function so a polytope
/// can be shared across threads.
class Polytope {
public:
    Polytope(Family family, Mat eq_matrix, Vec eq_rhs, Mat ineq_matrix, Vec ineq_rhs,
             GeometricConstants constants, LinearOracle oracle,
             std::optional<Vertex> initial_vertex = std::nullopt);

    Family family() const { return family_; }
    int dim() const { return dim_; }

    const Mat& eq_matrix() const { return a1_; }
    const Vec& eq_rhs() const { return b1_; }
    const Mat& ineq_matrix() const { return a2_; }
    const Vec& ineq_rhs() const { return b2_; }

    double diameter() const { return constants_.diameter; }
    double xi() const { return constants_.xi; }
    double psi() const { return constants_.psi; }
    /// psi * D / xi
    double mu() const { return mu_; }
    /// sqrt(n) * mu, the parameter of the local linear oracle built on this polytope.
    double rho() const { return rho_; }
    const GeometricConstants& constants() const { return constants_; }

    /// Weight the local linear oracle may move per unit of radius. Defaults to
    /// sqrt(n) psi / xi; the simplex uses the tighter sqrt(n) / 2 (its vertex
    /// decompositions are unique, so mass moved equals half the l1 distance).
    double llo_mass_per_radius() const { return mass_per_radius_; }

    const std::optional<OriginBalls>& origin_balls() const { return balls_; }

    /// Vertex used to start solvers. Obtained once at construction.
    const Vertex& initial_vertex() const { return initial_; }

    /// Vertex minimizing c^T v. Throws ArgumentError on a dimension mismatch
    /// or non-finite entries.
    Vertex minimize_linear(const Vec& c) const;

    /// True iff A1 x = b1 within tol and A2 x <= b2 + tol.
    bool contains(const Vec& x, double tol) const;

    /// Same polytope with a different oracle (used for instrumentation).
    Polytope with_oracle(LinearOracle oracle) const;
    /// Same polytope with the oracle it was constructed with, bypassing any
    /// wrapper installed by with_oracle (used for evaluation-only queries).
    Polytope without_instrumentation() const;

    Polytope with_mass_per_radius(double value) const;
    Polytope with_origin_balls(OriginBalls balls) const;

private:
    Family family_;
    int dim_;
    Mat a1_;
    Vec b1_;
    Mat a2_;
    Vec b2_;
    GeometricConstants constants_;
    double mu_;
    double rho_;
    double mass_per_radius_;
    std::optional<OriginBalls> balls_;
    LinearOracle oracle_;
    LinearOracle base_oracle_;
    Vertex initial_;
};

/// Probability simplex {x >= 0, sum x = 1} in R^n. D = sqrt 2, xi = psi = 1.
Polytope make_simplex(int n);

/// Unit hypercube [0,1]^n. D = sqrt n, xi = psi = 1.
Polytope make_hypercube(int n);

/// Convex hull of source->sink path indicator vectors of `graph`.
/// D is exact when the graph has at most 2000 paths, otherwise the upper
/// bound sqrt(2 * longest path length).
Polytope make_flow_polytope(const DagGraph& graph);

/// Corner simplex {x >= 0, sum x <= 1} translated so its incenter sits at the
/// origin, then scaled by `scale`. Carries its origin balls.
Polytope make_centered_simplex(int n, double scale = 1.0);

/// User-supplied polytope. Constants are taken as given and only checked for
/// positivity; the library never computes xi/psi for custom polytopes.
Polytope make_custom_polytope(Mat eq_matrix, Vec eq_rhs, Mat ineq_matrix, Vec ineq_rhs,
                              GeometricConstants constants, LinearOracle oracle);

Vertex minimize_linear(const Polytope& polytope, const Vec& c);
bool membership_check(const Polytope& polytope, const Vec& x, double tol);

/// Shared call counter for an instrumented oracle.
using OracleCounter = std::shared_ptr<std::atomic<long>>;

/// Wraps the polytope's oracle so every call increments the returned counter.
std::pair<Polytope, OracleCounter> instrument(const Polytope& polytope);

}  // namespace llocg
