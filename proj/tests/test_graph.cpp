#include "wbench/graph.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace wbench;

namespace {

Graph path(std::size_t l) {
    Graph g;
    for (std::size_t i = 0; i < l; ++i) g.add_vertex("v" + std::to_string(100 + i));
    for (std::size_t i = 0; i + 1 < l; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph random_graph(std::size_t n, double p, std::mt19937& rng) {
    std::bernoulli_distribution e(p);
    Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(std::to_string(10 + i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (e(rng)) g.add_edge(i, j);
    return g;
}

std::size_t union_find_components(const Graph& g) {
    std::vector<std::size_t> parent(g.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [a, b] : g.edges()) parent[find(a)] = find(b);
    std::size_t c = 0;
    for (std::size_t i = 0; i < g.size(); ++i) c += find(i) == i;
    return c;
}

}  // namespace

TEST_CASE("closed-form spectral gaps") {
    const double pi = std::acos(-1.0);
    for (std::size_t l = 3; l <= 20; ++l) {
        CHECK(algebraic_connectivity(path(l)) == doctest::Approx(2 * (1 - std::cos(pi / double(l)))).epsilon(1e-10));
        Graph c = path(l);
        c.add_edge(0, l - 1);
        CHECK(algebraic_connectivity(c) == doctest::Approx(2 * (1 - std::cos(2 * pi / double(l)))).epsilon(1e-10));
        Graph k;
        for (std::size_t i = 0; i < l; ++i) k.add_vertex(std::to_string(i));
        for (std::size_t i = 0; i < l; ++i)
            for (std::size_t j = i + 1; j < l; ++j) k.add_edge(i, j);
        CHECK(algebraic_connectivity(k) == doctest::Approx(double(l)).epsilon(1e-10));
    }
}

TEST_CASE("Laplacian rows sum to zero and the spectrum is nonnegative") {
    std::mt19937 rng(11);
    for (int t = 0; t < 20; ++t) {
        const Graph g = random_graph(9, 0.3, rng);
        const CMatrix l = laplacian(g).dense();
        CHECK(max_abs(l.rowwise().sum()) < 1e-14);
        CHECK(hermitian_eigs(l, -1.0, false).eigenvalues(0) > -1e-12);
    }
}

TEST_CASE("components match union-find and the ground space") {
    std::mt19937 rng(5);
    for (int t = 0; t < 50; ++t) {
        const Graph g = random_graph(8, 0.2, rng);
        const auto comps = component_indices(g);
        CHECK(comps.size() == union_find_components(g));
        CHECK(ground_space_basis(g).size() == comps.size());
        CHECK(is_connected(g) == (comps.size() == 1));
        CHECK((algebraic_connectivity(g) > 1e-9) == is_connected(g));
    }
}

TEST_CASE("graph input validation") {
    Graph g;
    g.add_vertex("a");
    g.add_vertex("b");
    CHECK(g.add_edge("a", "b"));
    CHECK_FALSE(g.add_edge("b", "a"));
    CHECK_THROWS(g.add_edge("a", "a"));
    CHECK_THROWS(g.add_edge("a", "zz"));
}

TEST_CASE("penalized path of three vertices") {
    // oracle: dense diagonalization of Delta + |v0><v0|
    Graph g = path(3);
    const PenalizedBound b = penalized_bound(g, {g.id(0)});
    CMatrix h = laplacian(g).dense();
    h(0, 0) += 1.0;
    const double ref = hermitian_eigs(h, -1.0, false).eigenvalues(0);
    CHECK(b.lambda_min == doctest::Approx(ref).epsilon(1e-12));
    CHECK(b.lambda_min == doctest::Approx(0.19806).epsilon(5e-5));
    CHECK(b.kitaev_lower_bound == doctest::Approx(0.18350).epsilon(5e-5));
}

TEST_CASE("the penalized bound holds on random connected graphs") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<std::size_t> pick(0, 6);
    int checked = 0;
    while (checked < 40) {
        const Graph g = random_graph(7, 0.5, rng);
        if (!is_connected(g)) continue;
        ++checked;
        const PenalizedBound b = penalized_bound(g, {g.id(pick(rng))});
        CHECK(b.lambda_min + 1e-9 >= b.kitaev_lower_bound);
    }
}

TEST_CASE("subspace angle of orthogonal and equal subspaces") {
    CMatrix a = CMatrix::Zero(3, 1), b = CMatrix::Zero(3, 1);
    a(0, 0) = 1;
    b(1, 0) = 1;
    CHECK(subspace_cos_angle(a, b) == doctest::Approx(0.0));
    CHECK(subspace_cos_angle(a, a) == doctest::Approx(1.0));
    CHECK(kitaev_bound(1.0, 0.0) == doctest::Approx(1.0));
}
