#pragma once

#include "flagcurv/errors.hpp"
#include "flagcurv/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace flagcurv {

/**
 * @brief Coordinate ring of the chart in the M(2,C) picture: symbols
 * z1_{mu t}, z2_{mu t} and their formal (Wirtinger) conjugates w1_{mu t},
 * w2_{mu t} for 0 <= mu < k, 0 <= t < n.
 *
 * The 2k x 2n index space carries the signed identifications
 *
 *   zeta_{2mu,   2t}   =  z1     zeta_{2mu,   2t+1} =  z2
 *   zeta_{2mu+1, 2t}   = -w2     zeta_{2mu+1, 2t+1} =  w1
 *
 * (zero-based; the conjugate and derivative maps follow by the same block
 * pattern). Monomials pack one 4-bit exponent per symbol into a 64-bit key,
 * so a ring holds at most 16 symbols (k n <= 4) with per-symbol degree
 * <= 15; the table checks stay far below both bounds.
 */
class PolyRing {
public:
    PolyRing(int k, int n);

    int k() const { return k_; }
    int n() const { return n_; }
    int symbol_count() const { return 4 * k_ * n_; }
    int rows() const { return 2 * k_; } // range of alpha indices
    int cols() const { return 2 * n_; } // range of a indices

    int z1(int mu, int t) const { return base(mu, t) + 0; }
    int z2(int mu, int t) const { return base(mu, t) + 1; }
    int w1(int mu, int t) const { return base(mu, t) + 2; }
    int w2(int mu, int t) const { return base(mu, t) + 3; }

    /// z1 <-> w1, z2 <-> w2.
    int conj_symbol(int s) const { return s ^ 2; }

    std::string symbol_name(int s) const;

    struct Signed {
        int sign;   // +1 or -1
        int symbol; // ring symbol index
    };

    Signed zeta(int alpha, int a) const;
    Signed zeta_bar(int alpha, int a) const;
    Signed d(int alpha, int a) const;
    Signed d_bar(int alpha, int a) const;

    /// Entries of J = 1 (x) j on a paired index space: J(2m, 2m+1) = +1,
    /// J(2m+1, 2m) = -1, zero elsewhere.
    static int J(int i, int j) {
        if ((i ^ 1) != j) return 0;
        return (i % 2 == 0) ? 1 : -1;
    }

    bool operator==(const PolyRing& o) const { return k_ == o.k_ && n_ == o.n_; }

private:
    int base(int mu, int t) const;
    int k_, n_;
};

/// Exponent key: 4 bits per symbol.
using Monomial = std::uint64_t;

int monomial_degree(Monomial m, int symbol_count);

/**
 * @brief Sparse multivariate polynomial with exact Gaussian-rational
 * coefficients. No stored zero coefficients; all arithmetic exact.
 */
class Polynomial {
public:
    explicit Polynomial(const PolyRing* ring) : ring_(ring) {}

    static Polynomial zero(const PolyRing& ring) { return Polynomial(&ring); }
    static Polynomial constant(const PolyRing& ring, GaussianRational c);
    static Polynomial symbol(const PolyRing& ring, int s);
    static Polynomial monomial(const PolyRing& ring, Monomial key, GaussianRational c);

    const PolyRing* ring() const { return ring_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, GaussianRational>& terms() const { return terms_; }

    void add_term(Monomial key, const GaussianRational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial scaled(const GaussianRational& c) const;

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    /// Exact partial derivative with respect to one symbol.
    Polynomial derivative(int symbol) const;

    /// Ring involution: z <-> w symbols, conjugated coefficients.
    Polynomial conjugated() const;

    /// Largest |re| + |im| over the coefficients, for residual reporting.
    double max_coeff_magnitude() const;

    std::string str() const;

private:
    const PolyRing* ring_;
    std::map<Monomial, GaussianRational> terms_;
};

/**
 * @brief First-order differential operator with polynomial coefficients:
 * sum of coeff * d/d(symbol) terms plus an optional multiplication term.
 */
class DiffOp {
public:
    explicit DiffOp(const PolyRing* ring) : ring_(ring) {}

    static DiffOp zero(const PolyRing& ring) { return DiffOp(&ring); }

    const PolyRing* ring() const { return ring_; }
    bool is_zero() const;

    /// deriv_symbol = -1 marks a multiplication (zeroth-order) term.
    void add_term(const Polynomial& coeff, int deriv_symbol);

    Polynomial apply(const Polynomial& f) const;

    DiffOp& operator+=(const DiffOp& o);
    DiffOp& operator-=(const DiffOp& o);
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
    DiffOp scaled(const GaussianRational& c) const;

    /// Formal conjugate: conj coefficients, z <-> w derivative symbols.
    /// Equals conj . op . conj as an operator.
    DiffOp conjugated() const;

    const std::map<int, Polynomial>& terms() const { return terms_; }

    std::string str() const;

private:
    const PolyRing* ring_;
    std::map<int, Polynomial> terms_; // deriv symbol (or -1) -> coefficient
};

Polynomial op_apply(const DiffOp& op, const Polynomial& f);

enum class GeneratorKind { h, H, p, pbar };

/// The chart realization of the sp(k+n) generators:
///   h_{ab} = zeta_{a c} d_{b c} - zetabar_{b c} dbar_{a c}
///   H_{ab} = zeta_{m a} d_{m b} - zetabar_{m b} dbar_{m a}
///   p_{ab} = dbar_{ab} + zeta_{a c} zeta_{m b} d_{m c}
///   pbar   = formal conjugate of p
/// Indices are zero-based: rows in [0, 2k), columns in [0, 2n).
DiffOp generator(const PolyRing& ring, GeneratorKind kind, int i, int j);

/// Internal building block r_{ab} = zeta_{a c} d_{b c} (h = r - r*).
DiffOp generator_r(const PolyRing& ring, int a, int b);

/// Max |coefficient| of ([A,B] - rhs) f = A(Bf) - B(Af) - rhs(f) over the
/// test set. Exactly zero when the relation holds.
double commutator_residual(const DiffOp& a, const DiffOp& b, const DiffOp& rhs,
                           const std::vector<Polynomial>& testset);

/// All monomials of total degree <= max_degree (including the constant 1).
std::vector<Polynomial> monomial_basis(const PolyRing& ring, int max_degree);

/// Seeded dense-ish polynomials with small Gaussian-rational coefficients.
std::vector<Polynomial> seeded_polynomials(const PolyRing& ring, int count, int degree,
                                           std::uint64_t seed);

struct RelationReport {
    std::string relation;
    long tuples = 0;
    double max_residual = 0.0;
};

struct TableReport {
    std::vector<RelationReport> relations;
    long applications = 0;
    double max_residual() const;
    bool all_zero() const { return max_residual() == 0.0; }
};

/// Checks all seven listed commutation relations plus the four derived
/// forms over every index combination, on all monomials of degree
/// <= degree plus 20 seeded degree-3 polynomials, and the symmetric-form
/// identity (hJ)_{ab} = (rJ)_{ab} + (rJ)_{ba}. Throws ConfigError when the
/// tuple x testset product would exceed 1e6 applications.
TableReport full_table_check(int k, int n, int degree, std::uint64_t seed = 2026);

struct WeightReport {
    bool eigen_ok = false;     // monomials are eigenvectors with integer weights
    bool table_ok = false;     // per-symbol weights match the signed z/w rule
    bool shift_ok = false;     // p shifts weights as the commutators predict
    long monomials_checked = 0;
    std::string detail;
    bool all_ok() const { return eigen_ok && table_ok && shift_ok; }
};

WeightReport weight_check(int k, int n);

/// Real dimension of the span of {h, H, p, pbar} acting on degree <= 1
/// polynomials, by exact Gaussian elimination. Equals (k+n)(2(k+n)+1).
long generated_algebra_rank(int k, int n);

/// Max residual of the defining index identities: d_{bb'} zeta_{aa'} =
/// delta delta and d_{bb'} zetabar_{aa'} = J_{b a} J_{b' a'}. Exact zero.
double index_maps_residual(const PolyRing& ring);

/// Max residual of h* = -h and H* = -H as operator identities (conjugate
/// transpose via the ring involution). Exact zero.
double skewness_residual(const PolyRing& ring, const std::vector<Polynomial>& testset);

} // namespace flagcurv
