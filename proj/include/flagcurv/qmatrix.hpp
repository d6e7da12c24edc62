#pragma once

#include "flagcurv/errors.hpp"
#include "flagcurv/quaternion.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace flagcurv {

/**
 * @brief Dense rectangular matrix of quaternions, row major.
 *
 * Carrier for Sp(N) elements, Stiefel blocks and chart tangents. All
 * reductions (inverse, exponential, condition estimates, eigenvalues) go
 * through the 2r x 2c complex embedding; see embed()/unembed().
 */
class QMatrix {
public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(int rows, int cols);

    static QMatrix identity(int n);
    static QMatrix zeros(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Quaternion& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Quaternion& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    bool operator==(const QMatrix&) const = default;

    QMatrix operator-() const;
    QMatrix& operator+=(const QMatrix& o);
    QMatrix& operator-=(const QMatrix& o);

    friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
    friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    friend QMatrix operator*(double s, const QMatrix& m);
    friend QMatrix operator*(const QMatrix& m, double s) { return s * m; }
    friend QMatrix operator*(const Quaternion& q, const QMatrix& m);
    friend QMatrix operator*(const QMatrix& m, const Quaternion& q);

    /// Sub-block of size (r x c) starting at (i0, j0).
    QMatrix block(int i0, int j0, int r, int c) const;
    void set_block(int i0, int j0, const QMatrix& sub);

private:
    int rows_, cols_;
    std::vector<Quaternion> data_;
};

/// Conjugate transpose over the quaternions.
QMatrix adjoint(const QMatrix& m);

/// entry (i,j) = sum_k A(i,k) B(k,j), quaternion products in that order.
QMatrix matmul(const QMatrix& a, const QMatrix& b);

/// Frobenius norm: sqrt of the sum of entry norm2's. Every residual in the
/// repo is measured in this norm.
double fro_norm(const QMatrix& m);

/// Real part of the sum of the diagonal entries. Cyclic over the
/// quaternions, unlike the full quaternion trace.
double re_trace(const QMatrix& m);

/// Sum of the diagonal entries as a quaternion.
Quaternion quat_trace(const QMatrix& m);

// ---------------------------------------------------------------------------
// Complex embedding
// ---------------------------------------------------------------------------

/// Blockwise M(2,C) embedding; an injective algebra homomorphism
/// (embed(AB) = embed(A) embed(B), embed(A*) = embed(A)^H).
Eigen::MatrixXcd embed(const QMatrix& m);

/// Inverse of embed(). Throws ValidationError if the 2x2 blocks violate the
/// quaternion structure constraint beyond `tol` (Frobenius, per block).
QMatrix unembed(const Eigen::MatrixXcd& z, double tol = 1e-10);

/// Inverse via the embedding. Throws SingularMatrixError when the embedded
/// condition number exceeds 1e12.
QMatrix q_inverse(const QMatrix& m);

/// Condition number of the embedding (SVD), infinity for singular input.
double embedded_cond(const QMatrix& m);

// ---------------------------------------------------------------------------
// Group and algebra elements
// ---------------------------------------------------------------------------

/**
 * @brief Element of Sp(N): square quaternion matrix with g g* = 1,
 * validated at construction (Frobenius tolerance 1e-10).
 */
class SpElement {
public:
    explicit SpElement(QMatrix m, double tol = kUnitarityTol);

    const QMatrix& mat() const { return mat_; }
    int dim() const { return mat_.rows(); }

    static constexpr double kUnitarityTol = 1e-10;

private:
    QMatrix mat_;
};

/**
 * @brief Element of sp(N): skew-Hermitian over the quaternions,
 * adjoint(mat) = -mat exactly as stored.
 */
class SpAlgebraElement {
public:
    explicit SpAlgebraElement(QMatrix m);

    const QMatrix& mat() const { return mat_; }
    int dim() const { return mat_.rows(); }

    /// Skew-Hermitian projection (m - m*)/2; exact by construction.
    static SpAlgebraElement project(const QMatrix& m);

    static SpAlgebraElement zeros(int n) { return SpAlgebraElement(QMatrix::zeros(n, n)); }

    friend SpAlgebraElement operator*(double s, const SpAlgebraElement& a) {
        return SpAlgebraElement(s * a.mat_);
    }

private:
    QMatrix mat_;
};

/// exp of a skew-Hermitian matrix, computed in the complex embedding;
/// lands in Sp(N) (validated).
SpElement q_expm(const SpAlgebraElement& a);

/// Commutator [A, B] = AB - BA; skew-Hermitian by structure.
SpAlgebraElement algebra_commutator(const SpAlgebraElement& a, const SpAlgebraElement& b);

SpAlgebraElement random_skew(int n, std::uint64_t seed);
SpElement random_sp(int n, std::uint64_t seed);
QMatrix random_tangent(int rows, int cols, std::uint64_t seed);

/// Real dimension of Sp(j): j(2j+1).
long sp_dimension(long j);

std::string to_string(const QMatrix& m);

} // namespace flagcurv
