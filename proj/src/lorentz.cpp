#include "flagcurv/lorentz.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace flagcurv {

C2Matrix c2_mul(const C2Matrix& a, const C2Matrix& b) {
    C2Matrix r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

C2Matrix c2_adjoint(const C2Matrix& m) {
    return {{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

std::complex<double> c2_det(const C2Matrix& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

SL2C::SL2C(C2Matrix m) : m_(m) {
    if (std::abs(c2_det(m_) - 1.0) > 1e-12)
        throw ValidationError("SL2C: determinant must be 1 within 1e-12");
}

BallPoint::BallPoint(std::array<double, 3> p) : v(p) {
    if (norm2() > 1.0 + 1e-12) throw ValidationError("BallPoint: squared norm exceeds 1");
}

PolarDecomposition polar_decompose(const SL2C& l) {
    Eigen::Matrix2cd m;
    m << l(0, 0), l(0, 1), l(1, 0), l(1, 1);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double lambda = svd.singularValues()(0); // s0 s1 = |det| = 1, s0 >= 1
    Eigen::Matrix2cd u = svd.matrixU();
    Eigen::Matrix2cd vh = svd.matrixV().adjoint();

    // diag(du, 1) commutes with the singular values, so moving it from u to
    // vh leaves the product alone while sending both determinants to 1
    // (det u * det v^H = det m = 1, both unit modulus)
    const std::complex<double> du = u.determinant();
    u = u * Eigen::Vector2cd(1.0 / du, 1.0).asDiagonal();
    vh = Eigen::Vector2cd(du, 1.0).asDiagonal() * vh;

    auto to_c2 = [](const Eigen::Matrix2cd& e) {
        return C2Matrix{{{e(0, 0), e(0, 1)}, {e(1, 0), e(1, 1)}}};
    };
    return {SL2C(to_c2(u)), lambda, SL2C(to_c2(vh))};
}

C2Matrix event_m2c(const Event& x) {
    const std::complex<double> z1{x.x0, x.x3}, z2{x.x1, x.x2};
    return {{{z1, z2}, {-std::conj(z2), std::conj(z1)}}};
}

C2Matrix event_hermitian(const Event& x) {
    using C = std::complex<double>;
    return {{{C{x.x0 + x.x3, 0.0}, C{x.x1, -x.x2}}, {C{x.x1, x.x2}, C{x.x0 - x.x3, 0.0}}}};
}

Event event_from_hermitian(const C2Matrix& m) {
    Event x;
    x.x0 = 0.5 * (m[0][0].real() + m[1][1].real());
    x.x3 = 0.5 * (m[0][0].real() - m[1][1].real());
    x.x1 = m[1][0].real();
    x.x2 = m[1][0].imag();
    return x;
}

C2Matrix act_on_event(const SL2C& l, const Event& x) {
    return c2_mul(l.mat(), c2_mul(event_m2c(x), c2_adjoint(l.mat())));
}

Event act_on_event_hermitian(const SL2C& l, const Event& x) {
    return event_from_hermitian(c2_mul(l.mat(), c2_mul(event_hermitian(x), c2_adjoint(l.mat()))));
}

std::array<std::array<double, 4>, 4> sl2c_to_lorentz(const SL2C& l) {
    std::array<std::array<double, 4>, 4> out{};
    for (int j = 0; j < 4; ++j) {
        Event basis;
        (j == 0 ? basis.x0 : j == 1 ? basis.x1 : j == 2 ? basis.x2 : basis.x3) = 1.0;
        Event img = act_on_event_hermitian(l, basis);
        out[0][j] = img.x0;
        out[1][j] = img.x1;
        out[2][j] = img.x2;
        out[3][j] = img.x3;
    }
    return out;
}

double boost_velocity(double lambda, double v) {
    if (!(lambda > 0)) throw ValidationError("boost_velocity: lambda > 0 required");
    const double l2 = lambda * lambda;
    const double c = 0.5 * (l2 + 1.0 / l2);
    const double s = 0.5 * (l2 - 1.0 / l2);
    const double denom = c + s * v;
    if (std::abs(denom) <= 1e-12 * (c + std::abs(s * v)))
        throw ValidationError("boost_velocity: pole C + S v = 0");
    return (s + c * v) / denom;
}

BallPoint hyperboloid_project(double y0, const std::array<double, 3>& yvec, double a) {
    if (a < 0) throw ValidationError("hyperboloid_project: a >= 0 required");
    const double r2 = yvec[0] * yvec[0] + yvec[1] * yvec[1] + yvec[2] * yvec[2];
    const double surface = y0 * y0 - r2 - a * a;
    const double scale = std::max({1.0, y0 * y0, r2, a * a});
    if (std::abs(surface) > 1e-9 * scale)
        throw ValidationError("hyperboloid_project: point is not on the hyperboloid");
    const double denom = std::abs(y0) + a;
    if (denom == 0.0)
        throw ValidationError("hyperboloid_project: degenerate |y0| + a = 0");
    return BallPoint({yvec[0] / denom, yvec[1] / denom, yvec[2] / denom});
}

BallPoint sphere_project(double x0, const std::array<double, 3>& xvec, double b) {
    if (!(b > 0)) throw ValidationError("sphere_project: b > 0 required");
    const double r2 = xvec[0] * xvec[0] + xvec[1] * xvec[1] + xvec[2] * xvec[2];
    const double surface = x0 * x0 + r2 - b * b;
    if (std::abs(surface) > 1e-9 * std::max(1.0, b * b))
        throw ValidationError("sphere_project: point is not on the sphere");
    const double denom = std::abs(x0) + b;
    return BallPoint({xvec[0] / denom, xvec[1] / denom, xvec[2] / denom});
}

EMFields em_decompose(const QuaternionField& a, const std::array<double, 4>& point, double step) {
    if (!(step >= 1e-6 && step <= 1e-2))
        throw ConfigError("em_decompose: step outside [1e-6, 1e-2]");

    // partial[mu] = dA/dx_mu by central differences
    std::array<Quaternion, 4> partial;
    for (int mu = 0; mu < 4; ++mu) {
        std::array<double, 4> plus = point, minus = point;
        plus[mu] += step;
        minus[mu] -= step;
        partial[mu] = (1.0 / (2.0 * step)) * (a(plus) - a(minus));
    }

    EMFields out;
    // components: A = A0 1 + A1 i + A2 j + A3 k; partial[mu].xN = dA_N/dx_mu
    out.f = partial[0].x0 - (partial[1].x1 + partial[2].x2 + partial[3].x3);
    out.E = {-(partial[0].x1 + partial[1].x0), -(partial[0].x2 + partial[2].x0),
             -(partial[0].x3 + partial[3].x0)};
    out.B = {partial[2].x3 - partial[3].x2, partial[3].x1 - partial[1].x3,
             partial[1].x2 - partial[2].x1};
    return out;
}

SL2C su2_from_euler(double alpha, double beta, double gamma) {
    using C = std::complex<double>;
    const C i{0, 1};
    const C2Matrix za = {{{std::exp(i * (alpha / 2)), C{}}, {C{}, std::exp(-i * (alpha / 2))}}};
    const C2Matrix yb = {{{C{std::cos(beta / 2)}, C{std::sin(beta / 2)}},
                          {C{-std::sin(beta / 2)}, C{std::cos(beta / 2)}}}};
    const C2Matrix zg = {{{std::exp(i * (gamma / 2)), C{}}, {C{}, std::exp(-i * (gamma / 2))}}};
    return SL2C(c2_mul(za, c2_mul(yb, zg)));
}

} // namespace flagcurv
