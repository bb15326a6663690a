#include "llocg/local_linear_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "llocg/errors.hpp"

namespace llocg {

namespace {

constexpr double kMembershipTol = 1e-8;

void check_query(int dim, double r, const Vec& c) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ArgumentError("llo: radius must be positive and finite");
    if (c.size() != dim) throw ArgumentError("llo: objective dimension mismatch");
    if (!c.allFinite()) throw ArgumentError("llo: non-finite objective");
}

Vertex coordinate_vertex(int n, int i) {
    Vec e = Vec::Zero(n);
    e(i) = 1.0;
    return Vertex{std::move(e), {i}};
}

// Indices ordered by decreasing score; equal scores keep the given order.
std::vector<std::size_t> by_decreasing_score(const std::vector<double>& score) {
    std::vector<std::size_t> order(score.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    return order;
}

}  // namespace

LLOResult LocalLinearOracle::query(const ConvexDecomposition& x, double r, const Vec& c) const {
    return llo_query(x, r, c, polytope_);
}

LLOResult llo_query(const ConvexDecomposition& x, double r, const Vec& c, const Polytope& polytope) {
    check_query(polytope.dim(), r, c);
    if (x.dim() != polytope.dim()) throw ArgumentError("llo: decomposition dimension mismatch");
    if (!polytope.contains(x.point(), kMembershipTol)) {
        throw StateError("llo: input point is not in the polytope");
    }

    double budget = std::min(polytope.llo_mass_per_radius() * r, 1.0);

    // Terms are already sorted by id, so a stable sort on score breaks ties by id.
    const auto& terms = x.terms();
    std::vector<double> score(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) score[i] = c.dot(terms[i].vertex.coords);

    std::vector<DecompositionTerm> out(terms.begin(), terms.end());
    double moved = 0.0;
    for (std::size_t i : by_decreasing_score(score)) {
        if (budget <= 0.0) break;
        const double take = std::min(out[i].weight, budget);
        out[i].weight -= take;
        budget -= take;
        moved += take;
    }

    Vertex v = polytope.minimize_linear(c);
    out.push_back({v, moved});
    return LLOResult{ConvexDecomposition(std::move(out)), std::move(v), moved};
}

LLOResult llo_query_simplex(const Vec& x, double r, const Vec& c) {
    const auto n = static_cast<int>(x.size());
    if (n < 2) throw ArgumentError("llo_simplex: dimension must be at least 2");
    check_query(n, r, c);
    if (!x.allFinite() || (x.array() < -1e-9).any() || std::abs(x.sum() - 1.0) > 1e-9) {
        throw StateError("llo_simplex: input point is not in the simplex");
    }

    int cheapest = 0;
    for (int i = 1; i < n; ++i) {
        if (c(i) < c(cheapest)) cheapest = i;
    }

    Vec p = x.cwiseMax(0.0);
    double budget = std::min(std::sqrt(static_cast<double>(n)) * r / 2.0, 1.0);
    double moved = 0.0;
    std::vector<double> score(c.data(), c.data() + n);
    for (std::size_t i : by_decreasing_score(score)) {
        if (budget <= 0.0) break;
        const double take = std::min(p(static_cast<Eigen::Index>(i)), budget);
        p(static_cast<Eigen::Index>(i)) -= take;
        budget -= take;
        moved += take;
    }
    p(cheapest) += moved;

    std::vector<DecompositionTerm> terms;
    for (int i = 0; i < n; ++i) {
        if (p(i) > 0.0) terms.push_back({coordinate_vertex(n, i), p(i)});
    }
    return LLOResult{ConvexDecomposition(std::move(terms)), coordinate_vertex(n, cheapest), moved};
}

ConvexDecomposition blend(const ConvexDecomposition& x, const LLOResult& result, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("blend: alpha must lie in (0, 1)");
    return mix(x, result.p, alpha);
}

std::size_t reduction_iteration_budget(const Polytope& polytope, double r_floor) {
    if (!(r_floor > 0.0)) throw ArgumentError("reduce: r_floor must be positive");
    if (polytope.family() == Family::simplex) return 0;
    const double d = polytope.diameter();
    if (r_floor >= d) return 0;
    const double rho = polytope.rho();
    return static_cast<std::size_t>(std::ceil(4.0 * rho * rho * std::log(d * d / (r_floor * r_floor))));
}

Reduction reduce_decomposition(const ConvexDecomposition& x, const Polytope& polytope, double r_floor,
                               std::optional<std::size_t> max_support) {
    if (!(r_floor > 0.0) || !std::isfinite(r_floor)) throw ArgumentError("reduce: r_floor must be positive");
    if (x.dim() != polytope.dim()) throw ArgumentError("reduce: dimension mismatch");
    if (max_support && *max_support < 2) throw ArgumentError("reduce: max_support must be at least 2");

    if (polytope.family() == Family::simplex) {
        const Vec& point = x.point();
        std::vector<DecompositionTerm> terms;
        for (int i = 0; i < point.size(); ++i) {
            if (point(i) > 0.0) terms.push_back({coordinate_vertex(static_cast<int>(point.size()), i), point(i)});
        }
        ConvexDecomposition exact(std::move(terms));
        const double distance = (exact.point() - point).norm();
        return {std::move(exact), 0, distance};
    }

    // Minimize g(y) = ||y - x||^2 (beta = sigma = 1) with the LLO-based solver.
    const Vec& target = x.point();
    ConvexDecomposition y = ConvexDecomposition::from_vertex(x.terms()[x.heaviest()].vertex);
    std::size_t budget = 0;
    if (max_support) {
        const std::size_t keep = *max_support / 2;
        budget = *max_support - keep;
        if (x.support_size() <= *max_support) return {x, 0, 0.0};
        std::vector<DecompositionTerm> heavy(x.terms().begin(), x.terms().end());
        std::stable_sort(heavy.begin(), heavy.end(),
                         [](const DecompositionTerm& a, const DecompositionTerm& b) { return a.weight > b.weight; });
        heavy.resize(keep);
        y = ConvexDecomposition(std::move(heavy));
    } else {
        budget = reduction_iteration_budget(polytope, r_floor);
    }
    const double goal = r_floor * r_floor;
    const double initial_gap = (y.point() - target).squaredNorm();
    if (initial_gap <= goal) return {std::move(y), 0, std::sqrt(initial_gap)};

    const double rho = polytope.rho();
    const double alpha = 1.0 / (2.0 * rho * rho);
    const double decay = 1.0 / (4.0 * rho * rho);
    long calls = 0;
    for (std::size_t t = 1; t <= budget; ++t) {
        const double r = std::min(std::sqrt(initial_gap * std::exp(-decay * static_cast<double>(t - 1))),
                                  polytope.diameter());
        LLOResult step = llo_query(y, r, 2.0 * (y.point() - target), polytope);
        ++calls;
        y = blend(y, step, alpha);
        if ((y.point() - target).squaredNorm() <= goal) break;
    }
    const double distance = (y.point() - target).norm();
    return {std::move(y), calls, distance};
}

}  // namespace llocg
