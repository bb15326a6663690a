#include "llocg/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "llocg/errors.hpp"

namespace llocg {

namespace {

bool id_less(const DecompositionTerm& a, const DecompositionTerm& b) { return a.vertex.id < b.vertex.id; }

}  // namespace

ConvexDecomposition::ConvexDecomposition(std::vector<DecompositionTerm> terms) {
    if (terms.empty()) throw ArgumentError("decomposition: no terms");
    const auto n = terms.front().vertex.coords.size();
    for (const auto& t : terms) {
        if (t.vertex.coords.size() != n) throw ArgumentError("decomposition: mixed dimensions");
        if (!std::isfinite(t.weight) || t.weight < 0.0) {
            throw ArgumentError("decomposition: weights must be finite and nonnegative");
        }
    }
    std::stable_sort(terms.begin(), terms.end(), id_less);
    for (auto& t : terms) {
        if (!terms_.empty() && terms_.back().vertex.id == t.vertex.id) {
            terms_.back().weight += t.weight;
        } else {
            terms_.push_back(std::move(t));
        }
    }
    finalize();
}

ConvexDecomposition ConvexDecomposition::from_vertex(Vertex v) {
    std::vector<DecompositionTerm> terms;
    terms.push_back({std::move(v), 1.0});
    return ConvexDecomposition(std::move(terms));
}

void ConvexDecomposition::finalize() {
    const Eigen::Index n = terms_.front().vertex.coords.size();
    double total = 0.0;
    for (const auto& t : terms_) total += t.weight;
    if (!(total > 0.0)) throw ArgumentError("decomposition: total weight is zero");
    for (auto& t : terms_) t.weight /= total;
    std::erase_if(terms_, [](const DecompositionTerm& t) { return t.weight < kPruneThreshold; });
    if (terms_.empty()) throw ArgumentError("decomposition: every weight was pruned");
    total = 0.0;
    for (const auto& t : terms_) total += t.weight;
    point_ = Vec::Zero(n);
    for (auto& t : terms_) {
        t.weight /= total;
        point_.noalias() += t.weight * t.vertex.coords;
    }
}

std::size_t ConvexDecomposition::heaviest() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < terms_.size(); ++i) {
        if (terms_[i].weight > terms_[best].weight) best = i;
    }
    return best;
}

ConvexDecomposition mix(const ConvexDecomposition& a, const ConvexDecomposition& b, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("mix: alpha must lie in [0, 1]");
    if (a.dim() != b.dim()) throw ArgumentError("mix: dimension mismatch");
    std::vector<DecompositionTerm> merged;
    merged.reserve(a.support_size() + b.support_size());
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() || ib != b.terms().end()) {
        if (ib == b.terms().end() || (ia != a.terms().end() && ia->vertex.id < ib->vertex.id)) {
            merged.push_back({ia->vertex, (1.0 - alpha) * ia->weight});
            ++ia;
        } else if (ia == a.terms().end() || ib->vertex.id < ia->vertex.id) {
            merged.push_back({ib->vertex, alpha * ib->weight});
            ++ib;
        } else {
            merged.push_back({ia->vertex, (1.0 - alpha) * ia->weight + alpha * ib->weight});
            ++ia;
            ++ib;
        }
    }
    return ConvexDecomposition(std::move(merged));
}

}  // namespace llocg
