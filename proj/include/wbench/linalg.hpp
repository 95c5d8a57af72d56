#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace wbench {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using SparseC = Eigen::SparseMatrix<cd>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Global numeric knobs. Matrix equality and eigen residuals use separate
// tolerances; both can be overridden from the CLI config.
struct Tolerances {
    double matrix = 1e-9;
    double residual = 1e-8;
    std::size_t eig_cap = 8192;
    std::size_t dense_limit = 2048;
    std::size_t tensor_cap = std::size_t(1) << 28;
};
Tolerances& tolerances();

// Hermitian operator stored as its upper triangle; add() accepts either
// triangle and folds lower-triangle entries onto their conjugate position.
class SparseHermitian {
public:
    struct Entry {
        std::size_t row, col;
        cd value;
    };

    SparseHermitian() = default;
    explicit SparseHermitian(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    void add(std::size_t r, std::size_t c, cd v);
    void add_diagonal(std::size_t i, double v) { add(i, i, cd(v, 0.0)); }
    // adds block m at (r0, c0) of the full matrix (and its Hermitian mirror
    // implicitly). r0 == c0 requires m Hermitian.
    void add_block(std::size_t r0, std::size_t c0, const CMatrix& m, double drop = 0.0);
    SparseHermitian& operator+=(const SparseHermitian& other);

    std::vector<Entry> entries() const;  // sorted by (row, col)
    std::size_t nnz() const { return data_.size(); }
    SparseC matrix() const;  // full Hermitian completion
    CMatrix dense() const;
    void validate() const;   // finite entries, real diagonal

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::uint64_t, cd> data_;
};

struct Spectrum {
    RVector eigenvalues;
    std::optional<CMatrix> eigenvectors;  // columns
    double residual_norm = 0.0;
};

struct EigOptions {
    bool vectors = true;
    double tol = -1.0;  // < 0 -> tolerances().residual
};

// Full spectrum, dense path. Throws when dim exceeds tolerances().eig_cap.
Spectrum hermitian_eigs(const SparseHermitian& op, double tol = -1.0, bool vectors = true);
Spectrum hermitian_eigs(const CMatrix& h, double tol = -1.0, bool vectors = true);

// k smallest eigenpairs. Dense below dense_limit, otherwise restarted
// Lanczos with deflation (handles degenerate eigenvalues one at a time).
Spectrum smallest_eigs(const SparseHermitian& op, std::size_t k, double tol = -1.0,
                       const CMatrix* deflate = nullptr);

using LinearMap = std::function<CVector(const CVector&)>;
Spectrum lanczos_smallest(const LinearMap& apply, std::size_t dim, std::size_t k, double tol,
                          const CMatrix* deflate = nullptr, std::uint64_t seed = 7);

template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
tensor(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    const double cells = double(ar) * double(br) * double(ac) * double(bc);
    if (cells > double(tolerances().tensor_cap))
        throw Error("tensor: result exceeds dimension cap");
    Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i)
        for (Eigen::Index j = 0; j < ac; ++j)
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    return out;
}

template <typename D>
double max_abs(const Eigen::MatrixBase<D>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename D>
bool is_unitary(const Eigen::MatrixBase<D>& m, double tol = -1.0) {
    if (m.rows() != m.cols()) throw Error("is_unitary: matrix not square");
    if (tol < 0) tol = tolerances().matrix;
    using M = Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    M g = m.adjoint() * m;
    return max_abs(g - M::Identity(m.rows(), m.cols())) <= tol;
}

template <typename D>
bool is_hermitian(const Eigen::MatrixBase<D>& m, double tol = -1.0) {
    if (m.rows() != m.cols()) return false;
    if (tol < 0) tol = tolerances().matrix;
    return max_abs(m - m.adjoint()) <= tol;
}

template <typename D>
bool is_projector(const Eigen::MatrixBase<D>& m, double tol = -1.0) {
    if (!is_hermitian(m, tol)) return false;
    if (tol < 0) tol = tolerances().matrix;
    return max_abs(m * m - m) <= tol;
}

inline CMatrix identity(std::size_t n) { return CMatrix::Identity(Eigen::Index(n), Eigen::Index(n)); }

// 1_left (x) u (x) 1_right without materializing intermediate products twice.
CMatrix embed(const CMatrix& u, std::size_t left, std::size_t right);

}  // namespace wbench
