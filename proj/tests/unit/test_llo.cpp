#include <doctest.h>

#include <cmath>
#include <random>

#include "llocg/errors.hpp"
#include "llocg/local_linear_oracle.hpp"
#include "support/oracles.hpp"

using namespace llocg;

namespace {

ConvexDecomposition barycenter3() {
    Polytope s = make_simplex(3);
    std::vector<DecompositionTerm> terms;
    for (int i = 0; i < 3; ++i) terms.push_back({s.minimize_linear(-Vec::Unit(3, i)), 1.0 / 3.0});
    return ConvexDecomposition(std::move(terms));
}

ConvexDecomposition random_decomposition(const Polytope& p, std::mt19937_64& rng, int terms) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<DecompositionTerm> out;
    for (int k = 0; k < terms; ++k) {
        Vec c(p.dim());
        for (int i = 0; i < p.dim(); ++i) c(i) = g(rng);
        out.push_back({p.minimize_linear(c), u(rng)});
    }
    return ConvexDecomposition(std::move(out));
}

}  // namespace

TEST_CASE("llo_query on the simplex barycenter") {
    Polytope s = make_simplex(3);
    const double r = 2.0 / (3.0 * std::sqrt(3.0));
    LLOResult res = llo_query(barycenter3(), r, Vec{{1.0, 2.0, 3.0}}, s);
    CHECK((res.p.point() - Vec{{2.0 / 3.0, 1.0 / 3.0, 0.0}}).norm() < 1e-12);
    CHECK(res.mass_moved == doctest::Approx(1.0 / 3.0));
    // Brute force over the ball agrees.
    const double grid = oracles::grid_min_in_ball(3, true, barycenter3().point(), r, Vec{{1.0, 2.0, 3.0}}, 1e-3);
    CHECK(Vec{{1.0, 2.0, 3.0}}.dot(res.p.point()) <= grid + 1e-9);
}

TEST_CASE("a radius covering all mass degenerates to the plain oracle step") {
    std::mt19937_64 rng(2);
    Polytope h = make_hypercube(4);
    const double r = h.xi() / (std::sqrt(4.0) * h.psi());
    for (int trial = 0; trial < 20; ++trial) {
        ConvexDecomposition x = random_decomposition(h, rng, 5);
        Vec c = Vec::Random(4);
        LLOResult res = llo_query(x, r, c, h);
        CHECK(res.p.support_size() == 1);
        CHECK(res.p.point() == h.minimize_linear(c).coords);
    }
}

TEST_CASE("zero objective leaves the value unchanged") {
    Polytope s = make_simplex(3);
    LLOResult res = llo_query(barycenter3(), 0.1, Vec::Zero(3), s);
    CHECK(Vec::Zero(3).dot(res.p.point()) == 0.0);
    CHECK(res.new_vertex.id == VertexId{0});
}

TEST_CASE("llo_query errors") {
    Polytope s = make_simplex(3);
    CHECK_THROWS_AS(llo_query(barycenter3(), 0.0, Vec::Ones(3), s), ArgumentError);
    CHECK_THROWS_AS(llo_query(barycenter3(), -1.0, Vec::Ones(3), s), ArgumentError);
    CHECK_THROWS_AS(llo_query(barycenter3(), 0.1, Vec{{NAN, 0.0, 0.0}}, s), ArgumentError);
    CHECK_THROWS_AS(llo_query(barycenter3(), 0.1, Vec::Ones(4), s), ArgumentError);
    // A decomposition over another polytope's vertices fails membership.
    Polytope h = make_hypercube(3);
    ConvexDecomposition outside = ConvexDecomposition::from_vertex(h.minimize_linear(-Vec::Ones(3)));
    CHECK_THROWS_AS(llo_query(outside, 0.1, Vec::Ones(3), s), StateError);
}

TEST_CASE("simplex fast path") {
    LLOResult a = llo_query_simplex(Vec::Constant(3, 1.0 / 3.0), 2.0 / (3.0 * std::sqrt(3.0)), Vec{{1.0, 2.0, 3.0}});
    CHECK((a.p.point() - Vec{{2.0 / 3.0, 1.0 / 3.0, 0.0}}).norm() < 1e-12);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vec x(4);
        for (int i = 0; i < 4; ++i) x(i) = u(rng);
        x /= x.sum();
        Vec c = Vec::Random(4);
        Eigen::Index best;
        c.minCoeff(&best);
        LLOResult res = llo_query_simplex(x, 2.0 / std::sqrt(4.0), c);
        CHECK(res.p.point() == Vec::Unit(4, best));
    }
    for (double r : {1e-3, 0.3, 5.0}) {
        LLOResult res = llo_query_simplex(Vec::Unit(3, 0), r, Vec{{0.0, 1.0, 1.0}});
        CHECK(res.p.point() == Vec::Unit(3, 0));
    }
}

TEST_CASE("fast path and general query agree on the simplex") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Polytope s = make_simplex(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<DecompositionTerm> terms;
        for (int i = 0; i < 5; ++i) {
            if (u(rng) < 0.7) terms.push_back({s.minimize_linear(-Vec::Unit(5, i)), u(rng) + 0.01});
        }
        if (terms.empty()) terms.push_back({s.minimize_linear(-Vec::Unit(5, 2)), 1.0});
        ConvexDecomposition x(std::move(terms));
        const Vec c = Vec::Random(5);
        const double r = 0.02 + u(rng);
        LLOResult general = llo_query(x, r, c, s);
        LLOResult fast = llo_query_simplex(x.point(), r, c);
        CHECK((general.p.point() - fast.p.point()).norm() < 1e-12);
    }
}

TEST_CASE("query optimality and distance bound against grid search") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (bool simplex : {true, false}) {
        const int n = simplex ? 3 : 2;
        Polytope p = simplex ? make_simplex(3) : make_hypercube(2);
        for (int trial = 0; trial < 30; ++trial) {
            ConvexDecomposition x = random_decomposition(p, rng, 4);
            Vec c = Vec::Random(n);
            const double r = 0.05 + 0.5 * u(rng);
            LLOResult res = llo_query(x, r, c, p);
            CHECK(p.contains(res.p.point(), 1e-9));
            CHECK((x.point() - res.p.point()).norm() <= p.rho() * r + 1e-9);
            CHECK(c.dot(res.p.point()) <= oracles::grid_min_in_ball(n, simplex, x.point(), r, c, 1e-2) + 1e-6);
        }
    }
}

TEST_CASE("each query grows the support by at most one and costs one oracle call") {
    std::mt19937_64 rng(13);
    auto [h, counter] = instrument(make_hypercube(5));
    ConvexDecomposition x = random_decomposition(h.without_instrumentation(), rng, 6);
    for (int k = 0; k < 50; ++k) {
        const long before = counter->load();
        LLOResult res = llo_query(x, 0.2, Vec::Random(5), h);
        CHECK(counter->load() == before + 1);
        CHECK(res.p.support_size() <= x.support_size() + 1);
        ConvexDecomposition next = blend(x, res, 0.3);
        CHECK(next.support_size() <= x.support_size() + 1);
        x = next;
    }
}

TEST_CASE("blend") {
    Polytope s = make_simplex(2);
    ConvexDecomposition e1 = ConvexDecomposition::from_vertex(s.minimize_linear(Vec{{0.0, 1.0}}));
    Vertex e2 = s.minimize_linear(Vec{{1.0, 0.0}});
    LLOResult res{ConvexDecomposition::from_vertex(e2), e2, 1.0};
    ConvexDecomposition half = blend(e1, res, 0.5);
    REQUIRE(half.support_size() == 2);
    CHECK(half.terms()[0].weight == doctest::Approx(0.5));
    CHECK(half.terms()[1].weight == doctest::Approx(0.5));
    CHECK((blend(e1, res, 1e-12).point() - e1.point()).norm() < 1e-10);
    CHECK_THROWS_AS(blend(e1, res, 0.0), ArgumentError);
    CHECK_THROWS_AS(blend(e1, res, 1.0), ArgumentError);
}

TEST_CASE("reduce_decomposition") {
    std::mt19937_64 rng(17);
    SUBCASE("simplex is reduced exactly") {
        Polytope s = make_simplex(4);
        ConvexDecomposition x = random_decomposition(s, rng, 12);
        Reduction red = reduce_decomposition(x, s, 1e-6);
        CHECK(red.oracle_calls == 0);
        CHECK(red.decomposition.point() == x.point());
        for (const auto& term : red.decomposition.terms()) CHECK(term.weight > 0.0);
    }
    SUBCASE("r_floor = D accepts a single vertex") {
        Polytope h = make_hypercube(3);
        ConvexDecomposition x = random_decomposition(h, rng, 6);
        Reduction red = reduce_decomposition(x, h, h.diameter());
        CHECK(red.decomposition.support_size() == 1);
        CHECK(red.distance <= h.diameter());
    }
    SUBCASE("hypercube, 20 terms, r_floor = 1e-3") {
        Polytope h = make_hypercube(3);
        std::uniform_real_distribution<double> u(0.05, 1.0);
        std::vector<DecompositionTerm> terms;
        const auto verts = oracles::enumerate_vertices(h);
        for (int k = 0; k < 20; ++k) {
            const Vec& v = verts[static_cast<std::size_t>(k) % verts.size()];
            // Vertex ids of the hypercube are its coordinate pattern, recovered via the oracle.
            terms.push_back({h.minimize_linear(Vec::Ones(3) - 2.0 * v), u(rng)});
        }
        ConvexDecomposition x(std::move(terms));
        Reduction red = reduce_decomposition(x, h, 1e-3);
        CHECK((red.decomposition.point() - x.point()).norm() <= 1e-3);
        CHECK(red.distance == doctest::Approx((red.decomposition.point() - x.point()).norm()));
        CHECK(static_cast<std::size_t>(red.oracle_calls) <= reduction_iteration_budget(h, 1e-3));
    }
    SUBCASE("max_support bounds the result") {
        Polytope h = make_hypercube(6);
        ConvexDecomposition x = random_decomposition(h, rng, 40);
        REQUIRE(x.support_size() > 16);
        Reduction red = reduce_decomposition(x, h, 1e-4, 16);
        CHECK(red.decomposition.support_size() <= 16);
        CHECK(red.oracle_calls <= 8);
        CHECK(red.distance == doctest::Approx((red.decomposition.point() - x.point()).norm()));
        CHECK_THROWS_AS(reduce_decomposition(x, h, 1e-4, 1), ArgumentError);
    }
}

TEST_CASE("decomposition invariants") {
    Polytope s = make_simplex(3);
    Vertex a = s.minimize_linear(Vec{{0.0, 1.0, 1.0}});
    Vertex b = s.minimize_linear(Vec{{1.0, 0.0, 1.0}});
    ConvexDecomposition d({{b, 1.0}, {a, 2.0}, {a, 1.0}, {b, 1e-15}});
    REQUIRE(d.support_size() == 2);
    CHECK(d.terms()[0].vertex.id < d.terms()[1].vertex.id);
    CHECK(d.terms()[0].weight == doctest::Approx(0.75));
    CHECK_THROWS_AS(ConvexDecomposition({{a, -1.0}}), ArgumentError);
    CHECK_THROWS_AS(ConvexDecomposition({{a, 0.0}}), ArgumentError);
}
