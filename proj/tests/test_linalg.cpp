#include "wbench/linalg.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace wbench;

namespace {

SparseHermitian random_sparse(std::size_t n, double density, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SparseHermitian h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h.add_diagonal(i, u(rng));
        for (std::size_t j = i + 1; j < n; ++j)
            if ((u(rng) + 1.0) / 2.0 < density) h.add(i, j, cd(u(rng), u(rng)));
    }
    return h;
}

}  // namespace

TEST_CASE("2x2 eigenvalues match the closed form") {
    // [[a, b], [b*, d]] -> (a+d)/2 +- sqrt(((a-d)/2)^2 + |b|^2)
    const double a = 0.3, d = -1.1;
    const cd b(0.4, -0.7);
    CMatrix h(2, 2);
    h << a, b, std::conj(b), d;
    const Spectrum s = hermitian_eigs(h);
    const double r = std::sqrt((a - d) * (a - d) / 4 + std::norm(b));
    CHECK(s.eigenvalues(0) == doctest::Approx((a + d) / 2 - r).epsilon(1e-12));
    CHECK(s.eigenvalues(1) == doctest::Approx((a + d) / 2 + r).epsilon(1e-12));
}

TEST_CASE("lower-triangle entries fold onto the conjugate position") {
    SparseHermitian h(3);
    h.add(2, 0, cd(1.0, 2.0));
    const CMatrix m = h.dense();
    CHECK(m(0, 2) == cd(1.0, -2.0));
    CHECK(m(2, 0) == cd(1.0, 2.0));
    CHECK(h.nnz() == 1);
    CHECK(is_hermitian(m));
}

TEST_CASE("Lanczos agrees with the dense solver") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const SparseHermitian h = random_sparse(300, 0.03, rng);
        const RVector dense = hermitian_eigs(h.dense(), -1.0, false).eigenvalues;
        const Spectrum sp = lanczos_smallest([&](const CVector& x) { return CVector(h.matrix() * x); }, h.dim(), 4,
                                             1e-10);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(sp.eigenvalues(i) - dense(i)) < 1e-8);
    }
}

TEST_CASE("Lanczos resolves degenerate eigenvalues") {
    // diag(0, 0, 0, 1, 2, ...) has a threefold ground space
    const std::size_t n = 200;
    SparseHermitian h(n);
    for (std::size_t i = 3; i < n; ++i) h.add_diagonal(i, double(i - 2));
    const Spectrum sp = lanczos_smallest([&](const CVector& x) { return CVector(h.matrix() * x); }, n, 4, 1e-10);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(sp.eigenvalues(i)) < 1e-8);
    CHECK(sp.eigenvalues(3) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("tensor and embed agree with Kronecker products") {
    CMatrix a(2, 2), b(3, 3);
    a << 1, 2, 3, 4;
    b.setRandom();
    const CMatrix t = tensor(a, b);
    CHECK(t.rows() == 6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(max_abs(t.block(3 * i, 3 * j, 3, 3) - a(i, j) * b) < 1e-15);
    const CMatrix e = embed(b, 2, 2);
    const CMatrix ref = tensor(tensor(identity(2), b), identity(2));
    CHECK(max_abs(e - ref) < 1e-15);
}

TEST_CASE("tensor refuses results above the dimension cap") {
    const std::size_t saved = tolerances().tensor_cap;
    tolerances().tensor_cap = 100;
    CHECK_THROWS_AS(tensor(identity(4), identity(4)), Error);
    tolerances().tensor_cap = saved;
}

TEST_CASE("predicates") {
    CMatrix p(2, 2);
    p << 0.5, 0.5, 0.5, 0.5;
    CHECK(is_projector(p));
    CHECK_FALSE(is_unitary(p));
    CHECK(is_unitary(identity(3)));
    CHECK_THROWS_AS(is_unitary(CMatrix(2, 3)), Error);
}
