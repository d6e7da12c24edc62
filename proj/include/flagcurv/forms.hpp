#pragma once

#include "flagcurv/grassmann.hpp"

#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

namespace flagcurv {

/// Ordered partition {k_mu} of N; defines the block view of Sp(N) matrices.
class Partition {
public:
    explicit Partition(std::vector<int> parts);
    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    int count() const { return static_cast<int>(parts_.size()); } // m
    int total() const { return total_; }                          // N
    int part(int mu) const { return parts_.at(mu); }
    int offset(int mu) const { return offsets_.at(mu); }
    const std::vector<int>& parts() const { return parts_; }

    QMatrix block_of(const QMatrix& m, int a, int b) const;
    bool is_block_diagonal(const QMatrix& m, double tol = 1e-10) const;

private:
    std::vector<int> parts_;
    std::vector<int> offsets_;
    int total_;
};

/**
 * @brief Two-parameter surface g(s, t) = exp(s A) exp(t B) g0 in Sp(N).
 *
 * The one pattern every exterior-derivative evaluation in this module uses:
 * d of a one-form is taken at (0,0) with central differences along s and t.
 */
class CurvePatch {
public:
    CurvePatch(SpElement g0, SpAlgebraElement a, SpAlgebraElement b);

    int dim() const { return g0_.dim(); }

    QMatrix at(double s, double t) const;

    /// omega = g* dg evaluated on the coordinate fields at (s, t).
    QMatrix omega_s(double s, double t) const;
    QMatrix omega_t(double s, double t) const;

    /// The same surface right-translated by a constant h: g(s,t) h.
    CurvePatch right_translated(const SpElement& h) const;

    const SpElement& g0() const { return g0_; }
    const SpAlgebraElement& a() const { return a_; }
    const SpAlgebraElement& b() const { return b_; }

private:
    SpElement g0_;
    SpAlgebraElement a_, b_;
};

/// Value of the connection form omega = g* dg on one tangent, with the
/// partition fixing the block view. Skew-Hermitian within 1e-10.
struct ConnectionValue {
    QMatrix omega;
    Partition partition;

    ConnectionValue(QMatrix w, Partition p);
    QMatrix block(int a, int b) const { return partition.block_of(omega, a, b); }
};

/// Value of a curvature two-form on an ordered tangent pair. Skew-Hermitian
/// within 1e-10; swapping the arguments negates it.
struct TwoFormValue {
    QMatrix value;
    QMatrix arg_s, arg_t;

    TwoFormValue(QMatrix v, QMatrix s, QMatrix t);
};

/// omega evaluated on a tangent v at g (g* v must be skew within 1e-8).
ConnectionValue connection_eval(const SpElement& g, const QMatrix& v, const Partition& p);

/// Full matrix of d(omega) + omega ^ omega on (ds, dt) at (0,0), with
/// d(omega) by central differences of step h.
QMatrix mc2_residual_matrix(const CurvePatch& patch, double h);

/// Largest block Frobenius norm of the Maurer-Cartan defect under p.
/// O(h^2) in the step; h must lie in [1e-6, 1e-2].
double mc2_residual(const CurvePatch& patch, const Partition& p, double h);

/// Residual of d(omega_12) + omega_11 ^ omega_12 + omega_12 ^ omega_22 on a
/// Grassmann partition (k, N-k).
double offdiag_mc_residual(const CurvePatch& patch, int k, double h);

struct CurvatureBlockDetail {
    QMatrix algebraic;    // sum over alpha != mu of omega_ma ^ omega_ma*
    QMatrix fd;           // d(omega_mm) + omega_mm ^ omega_mm by central differences
    double agreement;     // Frobenius distance between the two
    double mc2_reference; // MC2 residual of the same patch at the same step
};

CurvatureBlockDetail curvature_block_detail(const CurvePatch& patch, const Partition& p, int mu,
                                            double h);

/// Block curvature two-form on (ds, dt) at (0,0): the algebraic sum
/// Sigma_{alpha != mu} omega_ma ^ omega_ma*. Asserts agreement with the
/// finite-difference obstruction within max(10 x MC2 residual, 1e-8).
/// mu is a zero-based block index.
TwoFormValue curvature_block(const CurvePatch& patch, const Partition& p, int mu, double h);

/// Closed-form Grassmann curvature at the chart point of g (Y = B D^{-1}):
///   Omega_1(u,v) = A* u (1+Y*Y)^{-1} v* A - (u <-> v)      (k x k)
///   Omega_2(u,v) = D* u* (1+YY*)^{-1} v D - (u <-> v)      (n x n)
std::pair<TwoFormValue, TwoFormValue> curvature_closed_form(const BlockedGroupElement& g,
                                                            const GrassmannPoint& y,
                                                            const QMatrix& u, const QMatrix& v);

/// Ricci two-forms: quaternion traces of the closed-form curvature with the
/// gauge factors stripped. Antisymmetric in (u, v); real part vanishes.
std::pair<Quaternion, Quaternion> ricci_forms(const GrassmannPoint& y, const QMatrix& u,
                                              const QMatrix& v);

/// | (Omega_1 ^ omega_12 - omega_12 ^ Omega_2)(u, v, w) | with
/// omega_12(x) = -A* x D and the alternation convention
/// (Phi ^ theta)(u,v,w) = Phi(u,v)theta(w) - Phi(u,w)theta(v) + Phi(v,w)theta(u).
/// y must be the chart point of g. Purely algebraic; expected <= 1e-9.
double torsion_identity_residual(const BlockedGroupElement& g, const GrassmannPoint& y,
                                 const QMatrix& u, const QMatrix& v, const QMatrix& w);

/// h* value h for block-diagonal h (gauge change of cross-section).
QMatrix gauge_transform(const QMatrix& omega_or_Omega, const SpElement& h, const Partition& p);

using TwoFormEvaluator = std::function<QMatrix(const QMatrix&, const QMatrix&)>;

/// Chern traces: ell = 1 gives Re Tr Omega(u1, u2); ell = 2 alternates
/// Re Tr[Omega(.,.) Omega(.,.)] over the 4 arguments with 1/(2!2!)
/// normalization. Totally antisymmetric in the arguments.
double chern_trace(const TwoFormEvaluator& omega, const std::vector<QMatrix>& tangents, int ell);

/// Two-point (k = n = 1) Yang-Mills curvature:
///   Omega_1 = (1+|q|^2)^{-2} (u conj(v) - v conj(u))   [dq ^ dqbar]
///   Omega_2 = (1+|q|^2)^{-2} (conj(u) v - conj(v) u)   [dqbar ^ dq]
/// Values are pure imaginary; Omega_2(u,v) = Omega_1(conj u, conj v).
std::pair<Quaternion, Quaternion> ym_curvature(const Quaternion& q, const Quaternion& u,
                                               const Quaternion& v);

using R4TwoForm = std::function<Quaternion(const Quaternion&, const Quaternion&)>;

/// Applies the Hodge star (orientation e0^e1^e2^e3 = +1) to an
/// imaginary-quaternion-valued antisymmetric bilinear form on R^4 and
/// returns s with *F = s F. Throws MixedDualityError when no single s
/// works for all imaginary components.
int hodge_duality_sign(const R4TwoForm& form);

/// Chart/connection compatibility: for the curve gamma(t) = exp(tV) g with
/// g split at k, compares A* (dY/dt) D against minus the (1,2) block of the
/// connection of the chart-oriented assembly Sigma gamma Sigma,
/// Sigma = diag(1_k, -1_n). Returns the Frobenius defect.
double w12_residual(const SpElement& g, const SpAlgebraElement& v, int k);

} // namespace flagcurv
