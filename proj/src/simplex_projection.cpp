#include "llocg/simplex_projection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "llocg/errors.hpp"

namespace llocg {

Vec project_to_simplex(const Vec& y) {
    const Eigen::Index n = y.size();
    if (n < 1) throw ArgumentError("project_to_simplex: empty vector");
    if (!y.allFinite()) throw ArgumentError("project_to_simplex: non-finite input");
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cumulative += u[static_cast<std::size_t>(j)];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (u[static_cast<std::size_t>(j)] - candidate > 0.0) theta = candidate;
    }
    return (y.array() - theta).cwiseMax(0.0).matrix();
}

RegretReport projected_subgradient_baseline(LossStream& stream, const Polytope& simplex, int horizon,
                                            double grad_bound) {
    if (simplex.family() != Family::simplex) throw ArgumentError("projected_subgradient: polytope must be the simplex");
    if (horizon < 1 || stream.horizon() < horizon) throw ArgumentError("projected_subgradient: bad horizon");
    if (!(grad_bound > 0.0)) throw ArgumentError("projected_subgradient: grad_bound must be positive");

    const auto start = std::chrono::steady_clock::now();
    const double d = simplex.diameter();
    Vec x = simplex.initial_vertex().coords;
    RegretReport report;
    std::vector<Objective> losses;
    losses.reserve(static_cast<std::size_t>(horizon));
    bool all_linear = true;
    Vec coef_sum = Vec::Zero(simplex.dim());
    double cumulative = 0.0;
    for (int t = 1; t <= horizon; ++t) {
        Objective loss = stream.next(t, x);
        RoundRecord rec;
        rec.t = t;
        rec.loss = loss.value(x);
        cumulative += rec.loss;
        rec.support = static_cast<std::size_t>((x.array() > 0.0).count());
        if (all_linear && loss.linear_coefficients()) {
            coef_sum += *loss.linear_coefficients();
            rec.regret = cumulative - coef_sum.minCoeff();
        } else {
            all_linear = false;
        }
        x = project_to_simplex(x - d / (grad_bound * std::sqrt(static_cast<double>(t))) * loss.gradient(x));
        report.rounds.push_back(std::move(rec));
        losses.push_back(std::move(loss));
    }
    Comparator best = compute_comparator(losses, simplex);
    report.algorithm_loss = cumulative;
    report.comparator_loss = best.loss;
    report.regret = cumulative - best.loss;
    report.comparator = std::move(best.point);
    report.grad_bound = grad_bound;
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace llocg
