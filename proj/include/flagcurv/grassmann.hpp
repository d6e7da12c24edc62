#pragma once

#include "flagcurv/qmatrix.hpp"

#include <utility>

namespace flagcurv {

/// First k rows X = [Xk, Xn] of a group element, with X X* = 1.
struct StiefelBlock {
    QMatrix Xk; // k x k
    QMatrix Xn; // k x n

    int k() const { return Xk.rows(); }
    int n() const { return Xn.cols(); }
};

/**
 * @brief Point of the affine chart of Sp(k+n)/Sp(k)xSp(n): the k x n
 * quaternion matrix Y = Xk^{-1} Xn.
 *
 * Construction validates that 1 + YY* is Hermitian positive definite with
 * embedded eigenvalues >= 1 - 1e-10 (true for every chart point; the
 * validation guards numeric corruption).
 */
class GrassmannPoint {
public:
    explicit GrassmannPoint(QMatrix y);

    static GrassmannPoint zero(int k, int n) { return GrassmannPoint(QMatrix::zeros(k, n)); }

    const QMatrix& Y() const { return y_; }
    int k() const { return y_.rows(); }
    int n() const { return y_.cols(); }

private:
    QMatrix y_;
};

/**
 * @brief Group element split into chart-compatible blocks
 *
 *     g = [ A  B ]    A: k x k,  B: k x n,
 *         [ C  D ]    C: n x k,  D: n x n,
 *
 * acting on the chart by Y -> (AY + B)(CY + D)^{-1}. The assembled matrix
 * must pass the SpElement validator.
 */
class BlockedGroupElement {
public:
    BlockedGroupElement(QMatrix a, QMatrix b, QMatrix c, QMatrix d);

    /// Split an Sp(k+n) element along the first k rows/columns.
    static BlockedGroupElement split(const SpElement& g, int k);

    const QMatrix& A() const { return a_; }
    const QMatrix& B() const { return b_; }
    const QMatrix& C() const { return c_; }
    const QMatrix& D() const { return d_; }

    int k() const { return a_.rows(); }
    int n() const { return d_.rows(); }

    QMatrix assembled() const;

    /// The chart point this element sends 0 to: B D^{-1} = -(A*)^{-1} C*.
    GrassmannPoint base_point() const;

private:
    QMatrix a_, b_, c_, d_;
};

/// First k rows of g. 1 <= k < dim(g).
StiefelBlock stiefel_from_group(const SpElement& g, int k);

/// Y = Xk^{-1} Xn. Throws ChartError when Xk is singular (point outside
/// this affine chart).
GrassmannPoint grassmann_from_stiefel(const StiefelBlock& x);

/// Both closed forms of the linear fractional action:
/// (AY+B)(CY+D)^{-1} and (A* - Y B*)^{-1}(-C* + Y D*).
std::pair<QMatrix, QMatrix> lft_apply_both(const BlockedGroupElement& g, const GrassmannPoint& y);

/// Linear fractional action; asserts internally that both closed forms
/// agree to 1e-9. Throws ChartError when CY + D is singular.
GrassmannPoint lft_apply(const BlockedGroupElement& g, const GrassmannPoint& y);

/// Differential of the action at y applied to a tangent u (k x n):
/// (A* - Y B*)^{-1} u (CY + D)^{-1}.
QMatrix lft_pushforward(const BlockedGroupElement& g, const GrassmannPoint& y, const QMatrix& u);

/// Invariant metric: Re Tr[(1+YY*)^{-1} u (1+Y*Y)^{-1} v*].
double metric_eval(const GrassmannPoint& y, const QMatrix& u, const QMatrix& v);

/// Velocity of the chart point Y = B D^{-1} along the curve exp(tV) g at
/// t = 0: (B' - Y D') D^{-1} with [A' B'; C' D'] = V g.
QMatrix chart_velocity(const SpElement& g, const SpAlgebraElement& v, int k);

struct GrassmannDims {
    long dim_Y;     // 4kn
    long dim_X;     // 4kn + 2k^2 + k
    long dim_fiber; // k(2k+1)
};

GrassmannDims dimensions(int k, int n);

} // namespace flagcurv
