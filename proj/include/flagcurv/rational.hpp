#pragma once

#include "flagcurv/errors.hpp"

#include <cstdint>
#include <numeric>
#include <string>

namespace flagcurv {

/**
 * @brief Exact rational scalar on 64-bit integers.
 *
 * Always normalized (den > 0, gcd(|num|, den) = 1). Every operation checks
 * for overflow and throws ValidationError instead of wrapping, so results
 * are exact whenever a value is returned at all. The symbolic checks in
 * this repo work with coefficients far below the 64-bit range; the guard
 * keeps that an invariant rather than an assumption.
 */
class Rational {
public:
    Rational() = default;
    Rational(long long n) : num_(n) {}
    Rational(int n) : num_(n) {}
    Rational(long n) : num_(n) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator<(const Rational& o) const {
        return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
    }
    bool operator>(const Rational& o) const { return o < *this; }

    Rational operator-() const {
        Rational r;
        r.num_ = checked_neg(num_);
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const std::int64_t bs = b.den_ / g;
        Rational r;
        r.num_ = checked_add(checked_mul(a.num_, bs), checked_mul(b.num_, a.den_ / g));
        r.den_ = checked_mul(a.den_, bs);
        r.normalize();
        return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        const std::int64_t g1 = std::gcd(std::abs(a.num_), b.den_);
        const std::int64_t g2 = std::gcd(std::abs(b.num_), a.den_);
        Rational r;
        r.num_ = checked_mul(a.num_ / g1, b.num_ / g2);
        r.den_ = checked_mul(a.den_ / g2, b.den_ / g1);
        return r;
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw ValidationError("Rational: division by zero");
        Rational inv;
        inv.num_ = b.den_;
        inv.den_ = b.num_;
        if (inv.den_ < 0) {
            inv.num_ = checked_neg(inv.num_);
            inv.den_ = checked_neg(inv.den_);
        }
        return a * inv;
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r)) throw ValidationError("Rational: overflow in +");
        return r;
    }
    static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw ValidationError("Rational: overflow in *");
        return r;
    }
    static std::int64_t checked_neg(std::int64_t a) {
        std::int64_t r;
        if (__builtin_sub_overflow(std::int64_t{0}, a, &r))
            throw ValidationError("Rational: overflow in negation");
        return r;
    }

    void normalize() {
        if (den_ == 0) throw ValidationError("Rational: zero denominator");
        if (den_ < 0) {
            num_ = checked_neg(num_);
            den_ = checked_neg(den_);
        }
        const std::int64_t g = std::gcd(std::abs(num_), den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Complex number with exact rational real and imaginary parts.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(r) {}
    GaussianRational(long long r) : re(r) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(int r) : re(r) {}
    GaussianRational(Rational r, Rational i) : re(r), im(i) {}

    bool is_zero() const { return re == Rational() && im == Rational(); }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }

    friend GaussianRational conj(const GaussianRational& a) { return {a.re, -a.im}; }
};

/// |re| + |im| as a double, for residual reporting. Exact checks compare
/// against zero; this is only the reported magnitude.
inline double gr_magnitude(const GaussianRational& a) {
    const double r = a.re.to_double(), i = a.im.to_double();
    return (r < 0 ? -r : r) + (i < 0 ? -i : i);
}

std::string to_string(const GaussianRational& a);

} // namespace flagcurv
