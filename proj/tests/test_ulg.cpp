#include "wbench/ulg.hpp"

#include <doctest.h>

#include <random>

using namespace wbench;

namespace {

CMatrix random_unitary(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    CMatrix z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = cd(g(rng), g(rng));
    Eigen::HouseholderQR<CMatrix> qr(z);
    return qr.householderQ() * identity(n);
}

// Simple ULG from potentials: edge (a, b) carries V_b V_a^dag, so every cycle
// product telescopes to the identity.
Ulg potential_ulg(std::size_t n_vertices, std::size_t d, double p, std::mt19937& rng, Graph* shape = nullptr) {
    std::bernoulli_distribution e(p);
    std::vector<CMatrix> v;
    Ulg u(d);
    for (std::size_t i = 0; i < n_vertices; ++i) {
        u.add_vertex("x" + std::to_string(i));
        v.push_back(random_unitary(d, rng));
    }
    for (std::size_t i = 0; i < n_vertices; ++i)
        for (std::size_t j = i + 1; j < n_vertices; ++j)
            if (j == i + 1 || e(rng)) u.add_edge(u.graph().id(i), u.graph().id(j), v[j] * v[i].adjoint());
    if (shape) *shape = u.graph();
    return u;
}

}  // namespace

TEST_CASE("potential ULGs are simple and share the Laplacian spectrum") {
    std::mt19937 rng(21);
    for (int t = 0; t < 20; ++t) {
        const Ulg u = potential_ulg(7, 3, 0.4, rng);
        const SimplicityReport r = check_simple(u);
        CHECK(r.simple);
        const RVector h = hermitian_eigs(associated_hamiltonian(u), -1.0, false).eigenvalues;
        const RVector l = hermitian_eigs(laplacian(u.graph()).dense(), -1.0, false).eigenvalues;
        // oracle: each Laplacian eigenvalue repeated d times
        for (Eigen::Index i = 0; i < h.size(); ++i) CHECK(std::abs(h(i) - l(i / 3)) < 1e-9);
        const Diagonalizer d = diagonalize(u);
        CHECK(d.residual < 1e-9);
        CHECK(is_unitary(d.w, 1e-9));
    }
}

TEST_CASE("a twisted triangle is not simple and yields a witness") {
    Ulg u(2);
    u.add_vertex("a");
    u.add_vertex("b");
    u.add_vertex("c");
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    u.add_edge("a", "b", identity(2));
    u.add_edge("b", "c", identity(2));
    u.add_edge("c", "a", x);
    const SimplicityReport r = check_simple(u);
    REQUIRE_FALSE(r.simple);
    REQUIRE(r.witness);
    CHECK(r.witness->vertices.front() == r.witness->vertices.back());
    CHECK(r.witness->deviation == doctest::Approx(max_abs(CMatrix(x - identity(2)))));
}

TEST_CASE("labels read in reverse are adjoints") {
    std::mt19937 rng(2);
    Ulg u(2);
    u.add_vertex("p");
    u.add_vertex("q");
    const CMatrix w = random_unitary(2, rng);
    u.add_edge("q", "p", w);
    const std::size_t p = u.graph().index("p"), q = u.graph().index("q");
    CHECK(max_abs(CMatrix(u.label(q, p).full() - w)) < 1e-14);
    CHECK(max_abs(CMatrix(u.label(p, q).full() - w.adjoint())) < 1e-14);
}

TEST_CASE("history states lie in the kernel") {
    std::mt19937 rng(8);
    const Ulg u = potential_ulg(6, 2, 0.3, rng);
    const CMatrix h = associated_hamiltonian(u).dense();
    const auto states = ground_space_history_states(u);
    CHECK(states.size() == 2);
    for (const auto& s : states) CHECK((h * s).norm() < 1e-10);
}

TEST_CASE("JSON round trip preserves the ULG") {
    std::mt19937 rng(4);
    const Ulg u = potential_ulg(5, 2, 0.5, rng);
    const Ulg v = ulg_from_json(ulg_to_json(u));
    CHECK(v.graph().size() == u.graph().size());
    CHECK(v.edges().size() == u.edges().size());
    CHECK(max_abs(CMatrix(associated_hamiltonian(u).dense() - associated_hamiltonian(v).dense())) < 1e-12);
    CHECK(ulg_to_json(v) == ulg_to_json(u));
}

TEST_CASE("penalized ULG bound is a lower bound") {
    std::mt19937 rng(6);
    for (int t = 0; t < 10; ++t) {
        const Ulg u = potential_ulg(6, 2, 0.5, rng);
        CMatrix pen = CMatrix::Zero(2, 2);
        pen(0, 0) = 1.0;
        const UlgBound b = penalized_ulg_bound(u, {{u.graph().id(0), pen}});
        CHECK(b.lambda_min + 1e-9 >= b.lower_bound);
    }
}
