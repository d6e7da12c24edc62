#pragma once

#include "flagcurv/rational.hpp"

#include <cmath>
#include <complex>
#include <iosfwd>
#include <string>

namespace flagcurv {

/**
 * @brief Quaternion over a commutative scalar ring R.
 *
 * Components are (x0, x1, x2, x3) in the 1, i, j, k basis with the usual
 * rules i^2 = j^2 = k^2 = ijk = -1. The numeric path uses R = double; the
 * exact path uses R = Rational so that the ring identities (norm
 * multiplicativity, conjugation anti-homomorphism, associativity) can be
 * asserted with zero tolerance.
 */
template <class R>
struct Quat {
    R x0{}, x1{}, x2{}, x3{};

    Quat() = default;
    Quat(R a, R b, R c, R d) : x0(std::move(a)), x1(std::move(b)), x2(std::move(c)), x3(std::move(d)) {}
    /// Scalar (real) quaternion.
    explicit Quat(R a) : x0(std::move(a)) {}

    static Quat zero() { return {}; }
    static Quat one() { return Quat(R(1)); }

    bool operator==(const Quat&) const = default;

    Quat operator-() const { return {-x0, -x1, -x2, -x3}; }

    Quat& operator+=(const Quat& o) {
        x0 += o.x0; x1 += o.x1; x2 += o.x2; x3 += o.x3;
        return *this;
    }
    Quat& operator-=(const Quat& o) {
        x0 -= o.x0; x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
        return *this;
    }

    friend Quat operator+(Quat a, const Quat& b) { return a += b; }
    friend Quat operator-(Quat a, const Quat& b) { return a -= b; }

    // (a0 b0 - a.b) 1 + a0 b + b0 a + a x b
    friend Quat operator*(const Quat& a, const Quat& b) {
        return {a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
                a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
                a.x0 * b.x2 + a.x2 * b.x0 + a.x3 * b.x1 - a.x1 * b.x3,
                a.x0 * b.x3 + a.x3 * b.x0 + a.x1 * b.x2 - a.x2 * b.x1};
    }

    friend Quat operator*(const R& s, const Quat& q) {
        return {s * q.x0, s * q.x1, s * q.x2, s * q.x3};
    }
    friend Quat operator*(const Quat& q, const R& s) { return s * q; }
};

template <class R>
Quat<R> qmul(const Quat<R>& a, const Quat<R>& b) {
    return a * b;
}

/// Quaternion conjugate: scalar part kept, imaginary part negated.
template <class R>
Quat<R> conj(const Quat<R>& q) {
    return {q.x0, -q.x1, -q.x2, -q.x3};
}

template <class R>
R norm2(const Quat<R>& q) {
    return q.x0 * q.x0 + q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3;
}

using Quaternion = Quat<double>;
using QuaternionQ = Quat<Rational>;

inline double qnorm(const Quaternion& q) { return std::sqrt(norm2(q)); }

// ---------------------------------------------------------------------------
// M(2,C) basis
// ---------------------------------------------------------------------------

/**
 * @brief The M(2,C) form of a quaternion: the matrix
 *
 *        [  z1   z2 ]
 *        [ -~z2  ~z1]
 *
 * with z1 = x0 + i x3 and z2 = x1 + i x2 (~ is complex conjugation).
 * The matrix is determined by (z1, z2); det = |z1|^2 + |z2|^2 = norm2(q).
 * C is std::complex<double> on the numeric path and GaussianRational on the
 * exact path.
 */
template <class C>
struct M2C {
    C z1{}, z2{};
    bool operator==(const M2C&) const = default;
};

using M2CRep = M2C<std::complex<double>>;
using M2CRepQ = M2C<GaussianRational>;

inline M2CRep to_m2c(const Quaternion& q) {
    return {{q.x0, q.x3}, {q.x1, q.x2}};
}
inline M2CRepQ to_m2c(const QuaternionQ& q) {
    return {{q.x0, q.x3}, {q.x1, q.x2}};
}

inline Quaternion from_m2c(const M2CRep& m) {
    return {m.z1.real(), m.z2.real(), m.z2.imag(), m.z1.imag()};
}
inline QuaternionQ from_m2c(const M2CRepQ& m) {
    return {m.z1.re, m.z2.re, m.z2.im, m.z1.im};
}

namespace detail {
inline std::complex<double> cconj(const std::complex<double>& z) { return std::conj(z); }
inline GaussianRational cconj(const GaussianRational& z) { return conj(z); }
} // namespace detail

/// 2x2 complex matrix product of two M(2,C) forms, expressed on the (z1, z2)
/// generators. Used as the independent oracle for the quaternion product.
template <class C>
M2C<C> m2c_mul(const M2C<C>& a, const M2C<C>& b) {
    using detail::cconj;
    return {a.z1 * b.z1 - a.z2 * cconj(b.z2), a.z1 * b.z2 + a.z2 * cconj(b.z1)};
}

/**
 * @brief j-conjugation: the quaternion whose M(2,C) matrix is j' M2C(q) j
 * with j = [[0,1],[-1,0]].
 *
 * Entrywise this is complex conjugation of the matrix, (z1, z2) ->
 * (~z1, ~z2), i.e. components (x0, x1, -x2, -x3). It is an involution and
 * fixes the subfield spanned by 1 and i.
 */
template <class R>
Quat<R> j_conjugate(const Quat<R>& q) {
    return {q.x0, q.x1, -q.x2, -q.x3};
}

std::string to_string(const Quaternion& q);

} // namespace flagcurv
