#include "wbench/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace wbench {

Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

namespace {

std::uint64_t key(std::size_t r, std::size_t c, std::size_t dim) {
    return std::uint64_t(r) * std::uint64_t(dim) + std::uint64_t(c);
}

double effective_tol(double tol, double scale) {
    if (tol < 0) tol = tolerances().residual;
    return tol * std::max(1.0, scale);
}

}  // namespace

void SparseHermitian::add(std::size_t r, std::size_t c, cd v) {
    if (r >= dim_ || c >= dim_) throw Error("SparseHermitian::add: index out of range");
    if (v == cd(0.0, 0.0)) return;
    if (r > c) {
        std::swap(r, c);
        v = std::conj(v);
    }
    if (r == c) v = cd(v.real(), 0.0);
    data_[key(r, c, dim_)] += v;
}

void SparseHermitian::add_block(std::size_t r0, std::size_t c0, const CMatrix& m, double drop) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const cd v = m(i, j);
            if (std::abs(v) <= drop) continue;
            const std::size_t r = r0 + std::size_t(i), c = c0 + std::size_t(j);
            // a diagonal block contributes each off-diagonal pair twice
            if (r0 == c0 && r > c) continue;
            add(r, c, v);
        }
}

SparseHermitian& SparseHermitian::operator+=(const SparseHermitian& other) {
    if (other.dim_ != dim_) throw Error("SparseHermitian: dimension mismatch");
    for (const auto& [k, v] : other.data_) data_[k] += v;
    return *this;
}

std::vector<SparseHermitian::Entry> SparseHermitian::entries() const {
    std::vector<Entry> out;
    out.reserve(data_.size());
    for (const auto& [k, v] : data_) out.push_back({std::size_t(k / dim_), std::size_t(k % dim_), v});
    std::sort(out.begin(), out.end(),
              [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    return out;
}

SparseC SparseHermitian::matrix() const {
    std::vector<Eigen::Triplet<cd>> trips;
    trips.reserve(2 * data_.size());
    for (const auto& [k, v] : data_) {
        const auto r = Eigen::Index(k / dim_), c = Eigen::Index(k % dim_);
        trips.emplace_back(r, c, v);
        if (r != c) trips.emplace_back(c, r, std::conj(v));
    }
    SparseC m{Eigen::Index(dim_), Eigen::Index(dim_)};
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

CMatrix SparseHermitian::dense() const {
    CMatrix m = CMatrix::Zero(Eigen::Index(dim_), Eigen::Index(dim_));
    for (const auto& [k, v] : data_) {
        const auto r = Eigen::Index(k / dim_), c = Eigen::Index(k % dim_);
        m(r, c) += v;
        if (r != c) m(c, r) += std::conj(v);
    }
    return m;
}

void SparseHermitian::validate() const {
    for (const auto& [k, v] : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("SparseHermitian: non-finite entry");
        if (k / dim_ == k % dim_ && v.imag() != 0.0) throw Error("SparseHermitian: complex diagonal");
    }
}

Spectrum hermitian_eigs(const CMatrix& h, double tol, bool vectors) {
    if (std::size_t(h.rows()) > tolerances().eig_cap)
        throw Error("hermitian_eigs: dimension " + std::to_string(h.rows()) + " exceeds cap");
    if (!h.allFinite()) throw Error("hermitian_eigs: non-finite entries");
    Spectrum s;
    if (h.rows() == 0) {
        s.eigenvalues = RVector(0);
        return s;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("hermitian_eigs: no convergence");
    s.eigenvalues = es.eigenvalues();
    if (vectors) {
        const CMatrix& v = es.eigenvectors();
        const CMatrix r = h * v - v * s.eigenvalues.cast<cd>().asDiagonal();
        s.residual_norm = r.colwise().norm().maxCoeff();
        const double scale = h.cwiseAbs().rowwise().sum().maxCoeff();
        if (s.residual_norm > effective_tol(tol, scale))
            throw Error("hermitian_eigs: residual above tolerance");
        s.eigenvectors = v;
    }
    return s;
}

Spectrum hermitian_eigs(const SparseHermitian& op, double tol, bool vectors) {
    if (op.dim() > tolerances().eig_cap)
        throw Error("hermitian_eigs: dimension " + std::to_string(op.dim()) + " exceeds cap");
    op.validate();
    return hermitian_eigs(op.dense(), tol, vectors);
}

Spectrum smallest_eigs(const SparseHermitian& op, std::size_t k, double tol, const CMatrix* deflate) {
    k = std::min(k, op.dim() - (deflate ? std::size_t(deflate->cols()) : 0));
    if (op.dim() <= tolerances().dense_limit && !deflate) {
        Spectrum full = hermitian_eigs(op, tol, true);
        Spectrum s;
        s.eigenvalues = full.eigenvalues.head(Eigen::Index(k));
        s.eigenvectors = full.eigenvectors->leftCols(Eigen::Index(k));
        s.residual_norm = full.residual_norm;
        return s;
    }
    op.validate();
    const SparseC m = op.matrix();
    LinearMap apply = [&m](const CVector& x) -> CVector { return m * x; };
    return lanczos_smallest(apply, op.dim(), k, tol, deflate);
}

namespace {

void orthogonalize(CVector& w, const CMatrix& basis, Eigen::Index cols) {
    for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < cols; ++j) w -= basis.col(j) * basis.col(j).dot(w);
}

}  // namespace

Spectrum lanczos_smallest(const LinearMap& apply, std::size_t dim, std::size_t k, double tol,
                          const CMatrix* deflate, std::uint64_t seed) {
    if (tol < 0) tol = tolerances().residual;
    const Eigen::Index n = Eigen::Index(dim);
    const Eigen::Index nd = deflate ? deflate->cols() : 0;
    CMatrix locked(n, nd + Eigen::Index(k));
    if (nd) locked.leftCols(nd) = *deflate;
    Eigen::Index nlocked = nd;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    RVector values{Eigen::Index(k)};
    double worst = 0.0;

    auto project = [&](CVector& x) { orthogonalize(x, locked, nlocked); };
    auto op = [&](const CVector& x) {
        CVector y = apply(x);
        project(y);
        return y;
    };

    for (std::size_t found = 0; found < k; ++found) {
        CVector x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = cd(gauss(rng), gauss(rng));
        project(x);
        x.normalize();
        const Eigen::Index free_dim = n - nlocked;
        const Eigen::Index m = std::min<Eigen::Index>(free_dim, 160);
        double theta = 0.0;
        double res = 0.0;
        for (int restart = 0; restart < 400; ++restart) {
            CMatrix v(n, m + 1);
            RVector alpha(m), beta(m);
            v.col(0) = x;
            Eigen::Index steps = 0;
            for (Eigen::Index j = 0; j < m; ++j) {
                CVector w = op(v.col(j));
                alpha(j) = v.col(j).dot(w).real();
                orthogonalize(w, v, j + 1);
                project(w);
                beta(j) = w.norm();
                steps = j + 1;
                if (beta(j) < 1e-13) break;
                v.col(j + 1) = w / beta(j);
            }
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
            for (Eigen::Index j = 0; j < steps; ++j) {
                t(j, j) = alpha(j);
                if (j + 1 < steps) t(j, j + 1) = t(j + 1, j) = beta(j);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            theta = es.eigenvalues()(0);
            const Eigen::VectorXd y = es.eigenvectors().col(0);
            x = v.leftCols(steps) * y.cast<cd>();
            project(x);
            x.normalize();
            res = (op(x) - theta * x).norm();
            if (res <= tol || steps < m) break;
        }
        worst = std::max(worst, res);
        values(Eigen::Index(found)) = theta;
        locked.col(nlocked++) = x;
    }
    Spectrum s;
    std::vector<Eigen::Index> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = Eigen::Index(i);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values(a) < values(b); });
    s.eigenvalues = RVector(Eigen::Index(k));
    CMatrix vecs(n, Eigen::Index(k));
    for (std::size_t i = 0; i < k; ++i) {
        s.eigenvalues(Eigen::Index(i)) = values(order[i]);
        vecs.col(Eigen::Index(i)) = locked.col(nd + order[i]);
    }
    s.eigenvectors = vecs;
    s.residual_norm = worst;
    return s;
}

CMatrix embed(const CMatrix& u, std::size_t left, std::size_t right) {
    CMatrix out = u;
    if (right > 1) out = tensor(out, identity(right));
    if (left > 1) out = tensor(identity(left), out);
    return out;
}

}  // namespace wbench
