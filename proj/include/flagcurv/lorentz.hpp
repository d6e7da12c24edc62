#pragma once

#include "flagcurv/errors.hpp"
#include "flagcurv/quaternion.hpp"

#include <array>
#include <complex>
#include <functional>
#include <utility>

namespace flagcurv {

using C2Matrix = std::array<std::array<std::complex<double>, 2>, 2>;

C2Matrix c2_mul(const C2Matrix& a, const C2Matrix& b);
C2Matrix c2_adjoint(const C2Matrix& m);
std::complex<double> c2_det(const C2Matrix& m);

/// Element of SL(2,C); det = 1 validated to 1e-12 at construction.
class SL2C {
public:
    explicit SL2C(C2Matrix m);
    SL2C(std::complex<double> a, std::complex<double> b, std::complex<double> c,
         std::complex<double> d)
        : SL2C(C2Matrix{{{a, b}, {c, d}}}) {}

    static SL2C identity() { return SL2C(1.0, 0.0, 0.0, 1.0); }

    const C2Matrix& mat() const { return m_; }
    std::complex<double> operator()(int i, int j) const { return m_[i][j]; }

    friend SL2C operator*(const SL2C& a, const SL2C& b) { return SL2C(c2_mul(a.m_, b.m_)); }
    SL2C negated() const { return SL2C(C2Matrix{{{-m_[0][0], -m_[0][1]}, {-m_[1][0], -m_[1][1]}}}); }

private:
    C2Matrix m_;
};

/// Spacetime event (x0 = ct, x1, x2, x3), all in length units.
struct Event {
    double x0 = 0, x1 = 0, x2 = 0, x3 = 0;
};

/// Point of the open/closed unit 3-ball (velocity space); squared norm <= 1
/// validated at construction.
struct BallPoint {
    std::array<double, 3> v{};

    explicit BallPoint(std::array<double, 3> p);
    double norm2() const { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }
};

/// f 1 - E + B split of the quaternion derivative of a potential.
struct EMFields {
    double f = 0;
    std::array<double, 3> E{};
    std::array<double, 3> B{};
};

struct PolarDecomposition {
    SL2C rho;      // unitary, det 1
    double lambda; // >= 1
    SL2C tau;      // unitary, det 1
};

/// L = rho diag(lambda, 1/lambda) tau with unitary rho, tau (det 1).
PolarDecomposition polar_decompose(const SL2C& l);

/// The M(2,C) form of an event (z1 = x0 + i x3, z2 = x1 + i x2; Euclidean
/// determinant).
C2Matrix event_m2c(const Event& x);

/// The Hermitian (Pauli) form X = x0 s0 + x1 s1 + x2 s2 + x3 s3, whose
/// determinant is the Minkowski interval x0^2 - |x|^2.
C2Matrix event_hermitian(const Event& x);
Event event_from_hermitian(const C2Matrix& m);

/// L q L* on the M(2,C) form of the event; preserves the (Euclidean)
/// determinant since det L = 1.
C2Matrix act_on_event(const SL2C& l, const Event& x);

/// Same sandwich on the Hermitian form; preserves the Minkowski interval.
Event act_on_event_hermitian(const SL2C& l, const Event& x);

/// The SO(1,3) matrix of L through the Hermitian representation;
/// satisfies Lhat^T eta Lhat = eta, Lhat(L) = Lhat(-L), and the
/// homomorphism property.
std::array<std::array<double, 4>, 4> sl2c_to_lorentz(const SL2C& l);

/// Boosted speed (S + C v)/(C + S v) with C = (l^2 + l^-2)/2,
/// S = (l^2 - l^-2)/2 (the x3 -> -i x3 convention, so v is real).
/// Fixed points v = +-1; throws on the pole C + S v = 0.
double boost_velocity(double lambda, double v);

/// Projection of the hyperboloid y0^2 - |y|^2 = a^2 into the ball:
/// y / (|y0| + a). Validates on-surface membership to 1e-9.
BallPoint hyperboloid_project(double y0, const std::array<double, 3>& yvec, double a);

/// Stereographic-style projection of the sphere x0^2 + |x|^2 = b^2 into the
/// ball: x / (|x0| + b). Validates on-surface membership to 1e-9.
BallPoint sphere_project(double x0, const std::array<double, 3>& xvec, double b);

using QuaternionField = std::function<Quaternion(const std::array<double, 4>&)>;

/// Central-difference f 1 - E + B decomposition of the quaternion
/// derivative of A at a point: f = d0 A0 - div A, E = -(d0 Avec + grad A0),
/// B = curl Avec. Step must lie in [1e-6, 1e-2].
EMFields em_decompose(const QuaternionField& a, const std::array<double, 4>& point, double step);

/// SU(2) element from Euler angles (documented constructor; only unitarity
/// is guaranteed).
SL2C su2_from_euler(double alpha, double beta, double gamma);

} // namespace flagcurv
