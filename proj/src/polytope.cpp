#include "llocg/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "llocg/errors.hpp"

namespace llocg {

namespace {

void require_finite(const Vec& c, const char* what) {
    if (!c.allFinite()) {
        throw ArgumentError(std::string(what) + ": non-finite entry");
    }
}

Vec unit(int n, int i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    return e;
}

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::simplex: return "simplex";
        case Family::hypercube: return "hypercube";
        case Family::flow_dag: return "flow_dag";
        case Family::centered_simplex: return "centered_simplex";
        case Family::custom: return "custom";
    }
    return "unknown";
}

Polytope::Polytope(Family family, Mat eq_matrix, Vec eq_rhs, Mat ineq_matrix, Vec ineq_rhs,
                   GeometricConstants constants, LinearOracle oracle,
                   std::optional<Vertex> initial_vertex)
    : family_(family),
      dim_(static_cast<int>(ineq_matrix.cols())),
      a1_(std::move(eq_matrix)),
      b1_(std::move(eq_rhs)),
      a2_(std::move(ineq_matrix)),
      b2_(std::move(ineq_rhs)),
      constants_(constants),
      oracle_(std::move(oracle)) {
    if (dim_ <= 0) throw ArgumentError("polytope: dimension must be positive");
    if (a2_.rows() != b2_.size()) throw ArgumentError("polytope: A2/b2 row mismatch");
    if (a1_.rows() == 0) {
        a1_.resize(0, dim_);
        b1_.resize(0);
    }
    if (a1_.cols() != dim_ || a1_.rows() != b1_.size()) {
        throw ArgumentError("polytope: A1/b1 shape mismatch");
    }
    if (!(constants_.diameter > 0.0) || !(constants_.xi > 0.0) || !(constants_.psi > 0.0) ||
        !std::isfinite(constants_.diameter) || !std::isfinite(constants_.xi) ||
        !std::isfinite(constants_.psi)) {
        throw ArgumentError("polytope: D, xi and psi must be positive and finite");
    }
    if (!oracle_) throw ArgumentError("polytope: missing linear oracle");
    base_oracle_ = oracle_;
    mu_ = constants_.psi * constants_.diameter / constants_.xi;
    rho_ = std::sqrt(static_cast<double>(dim_)) * mu_;
    mass_per_radius_ = std::sqrt(static_cast<double>(dim_)) * constants_.psi / constants_.xi;
    initial_ = initial_vertex ? std::move(*initial_vertex) : oracle_(Vec::Zero(dim_));
    if (initial_.coords.size() != dim_) throw ArgumentError("polytope: initial vertex dimension");
}

Vertex Polytope::minimize_linear(const Vec& c) const {
    if (c.size() != dim_) {
        std::ostringstream msg;
        msg << "minimize_linear: objective has length " << c.size() << ", expected " << dim_;
        throw ArgumentError(msg.str());
    }
    require_finite(c, "minimize_linear");
    return oracle_(c);
}

bool Polytope::contains(const Vec& x, double tol) const {
    if (x.size() != dim_) throw ArgumentError("membership_check: dimension mismatch");
    if (tol < 0.0) throw ArgumentError("membership_check: negative tolerance");
    if (!x.allFinite()) return false;
    if (a1_.rows() > 0 && ((a1_ * x - b1_).cwiseAbs().array() > tol).any()) return false;
    if (a2_.rows() > 0 && ((a2_ * x - b2_).array() > tol).any()) return false;
    return true;
}

Polytope Polytope::with_oracle(LinearOracle oracle) const {
    if (!oracle) throw ArgumentError("with_oracle: empty oracle");
    Polytope copy = *this;
    copy.oracle_ = std::move(oracle);
    return copy;
}

Polytope Polytope::without_instrumentation() const {
    Polytope copy = *this;
    copy.oracle_ = base_oracle_;
    return copy;
}

Polytope Polytope::with_mass_per_radius(double value) const {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ArgumentError("llo mass per radius must be positive");
    }
    Polytope copy = *this;
    copy.mass_per_radius_ = value;
    return copy;
}

Polytope Polytope::with_origin_balls(OriginBalls balls) const {
    if (!(balls.inner > 0.0) || balls.outer < balls.inner) {
        throw ArgumentError("origin balls: need 0 < r <= R");
    }
    Polytope copy = *this;
    copy.balls_ = balls;
    return copy;
}

Polytope make_simplex(int n) {
    if (n < 2) throw ArgumentError("simplex: n must be at least 2");
    Mat a1 = Mat::Ones(1, n);
    Vec b1 = Vec::Ones(1);
    Mat a2 = -Mat::Identity(n, n);
    Vec b2 = Vec::Zero(n);
    LinearOracle oracle = [n](const Vec& c) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < n; ++i) {
            if (c(i) < c(best)) best = i;
        }
        return Vertex{unit(n, static_cast<int>(best)), {static_cast<std::int64_t>(best)}};
    };
    GeometricConstants k{std::sqrt(2.0), 1.0, 1.0};
    Polytope p(Family::simplex, a1, b1, a2, b2, k, oracle);
    return p.with_mass_per_radius(std::sqrt(static_cast<double>(n)) / 2.0);
}

Polytope make_hypercube(int n) {
    if (n < 1) throw ArgumentError("hypercube: n must be positive");
    Mat a2(2 * n, n);
    a2 << Mat::Identity(n, n), -Mat::Identity(n, n);
    Vec b2(2 * n);
    b2 << Vec::Ones(n), Vec::Zero(n);
    LinearOracle oracle = [n](const Vec& c) {
        Vertex v{Vec::Zero(n), {}};
        for (int i = 0; i < n; ++i) {
            if (c(i) < 0.0) {
                v.coords(i) = 1.0;
                v.id.push_back(i);
            }
        }
        return v;
    };
    GeometricConstants k{std::sqrt(static_cast<double>(n)), 1.0, 1.0};
    return Polytope(Family::hypercube, Mat(0, n), Vec(0), a2, b2, k, oracle);
}

Polytope make_flow_polytope(const DagGraph& graph) {
    const int nodes = graph.node_count();
    const int m = graph.edge_count();
    // Conservation rows for every node except the sink (its row is implied).
    Mat a1 = Mat::Zero(nodes - 1, m);
    Vec b1 = Vec::Zero(nodes - 1);
    auto row_of = [&](int node) { return node < graph.sink() ? node : node - 1; };
    for (int e = 0; e < m; ++e) {
        auto [u, v] = graph.edges()[static_cast<std::size_t>(e)];
        if (u != graph.sink()) a1(row_of(u), e) += 1.0;
        if (v != graph.sink()) a1(row_of(v), e) -= 1.0;
    }
    b1(row_of(graph.source())) = 1.0;
    Mat a2 = -Mat::Identity(m, m);
    Vec b2 = Vec::Zero(m);

    double diameter = 0.0;
    if (graph.path_count() <= 2000.0) {
        auto paths = graph.enumerate_paths(2000);
        std::vector<Vec> chi;
        chi.reserve(paths.size());
        for (const auto& path : paths) {
            Vec v = Vec::Zero(m);
            for (int e : path) v(e) = 1.0;
            chi.push_back(std::move(v));
        }
        for (std::size_t i = 0; i < chi.size(); ++i) {
            for (std::size_t j = i + 1; j < chi.size(); ++j) {
                diameter = std::max(diameter, (chi[i] - chi[j]).norm());
            }
        }
    } else {
        diameter = std::sqrt(2.0 * graph.longest_path_edges());
    }
    // A single-path graph is one point; keep D positive so mu stays defined.
    if (diameter == 0.0) diameter = std::numeric_limits<double>::min();

    auto shared = std::make_shared<const DagGraph>(graph);
    LinearOracle oracle = [shared, m](const Vec& c) {
        const DagGraph& g = *shared;
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> dist(static_cast<std::size_t>(g.node_count()), inf);
        std::vector<int> pred(static_cast<std::size_t>(g.node_count()), -1);
        dist[static_cast<std::size_t>(g.source())] = 0.0;
        for (int u : g.topological_order()) {
            const double du = dist[static_cast<std::size_t>(u)];
            if (du == inf) continue;
            for (int e : g.out_edges()[static_cast<std::size_t>(u)]) {
                const int v = g.edges()[static_cast<std::size_t>(e)].second;
                const double cand = du + c(e);
                if (cand < dist[static_cast<std::size_t>(v)]) {
                    dist[static_cast<std::size_t>(v)] = cand;
                    pred[static_cast<std::size_t>(v)] = e;
                }
            }
        }
        Vertex vert{Vec::Zero(m), {}};
        for (int node = g.sink(); node != g.source();) {
            const int e = pred[static_cast<std::size_t>(node)];
            vert.coords(e) = 1.0;
            vert.id.push_back(e);
            node = g.edges()[static_cast<std::size_t>(e)].first;
        }
        std::reverse(vert.id.begin(), vert.id.end());
        return vert;
    };
    GeometricConstants k{diameter, 1.0, 1.0};
    return Polytope(Family::flow_dag, a1, b1, a2, b2, k, oracle);
}

Polytope make_centered_simplex(int n, double scale) {
    if (n < 1) throw ArgumentError("centered_simplex: n must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ArgumentError("centered_simplex: scale must be positive");
    }
    const double dn = static_cast<double>(n);
    const double center = 1.0 / (dn + std::sqrt(dn));
    // x = y / scale + center * 1 maps the image back to the corner simplex.
    Mat a2(n + 1, n);
    a2 << -Mat::Identity(n, n), Mat::Ones(1, n);
    Vec b2(n + 1);
    b2 << Vec::Constant(n, scale * center), Vec::Constant(1, scale * (1.0 - dn * center));

    LinearOracle oracle = [n, scale, center](const Vec& c) {
        // Vertices: scale * (0 - center 1) with id {}, scale * (e_i - center 1) with id {i}.
        int best = -1;
        double best_val = 0.0;
        for (int i = 0; i < n; ++i) {
            if (c(i) < best_val) {
                best_val = c(i);
                best = i;
            }
        }
        Vertex v{Vec::Constant(n, -scale * center), {}};
        if (best >= 0) {
            v.coords(best) += scale;
            v.id.push_back(best);
        }
        return v;
    };
    const double psi = std::sqrt(((dn + 1.0) + std::sqrt((dn - 1.0) * (dn + 3.0))) / 2.0);
    GeometricConstants k{scale * (n >= 2 ? std::sqrt(2.0) : 1.0), scale, psi};
    const double outer = scale * std::sqrt((1.0 - center) * (1.0 - center) + (dn - 1.0) * center * center);
    return Polytope(Family::centered_simplex, Mat(0, n), Vec(0), a2, b2, k, oracle)
        .with_origin_balls({scale * center, outer});
}

Polytope make_custom_polytope(Mat eq_matrix, Vec eq_rhs, Mat ineq_matrix, Vec ineq_rhs,
                              GeometricConstants constants, LinearOracle oracle) {
    return Polytope(Family::custom, std::move(eq_matrix), std::move(eq_rhs), std::move(ineq_matrix),
                    std::move(ineq_rhs), constants, std::move(oracle));
}

Vertex minimize_linear(const Polytope& polytope, const Vec& c) { return polytope.minimize_linear(c); }

bool membership_check(const Polytope& polytope, const Vec& x, double tol) {
    return polytope.contains(x, tol);
}

std::pair<Polytope, OracleCounter> instrument(const Polytope& polytope) {
    auto counter = std::make_shared<std::atomic<long>>(0);
    auto inner = std::make_shared<const Polytope>(polytope);
    LinearOracle wrapped = [inner, counter](const Vec& c) {
        counter->fetch_add(1, std::memory_order_relaxed);
        return inner->minimize_linear(c);
    };
    return {polytope.with_oracle(std::move(wrapped)), counter};
}

}  // namespace llocg
