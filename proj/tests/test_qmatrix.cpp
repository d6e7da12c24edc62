#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagcurv/qmatrix.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace flagcurv;

namespace {

// Test-side embedding oracle, built directly from the M(2,C) convention and
// multiplied with Eigen. Independent of the library's matmul and embed.
Eigen::MatrixXcd oracle_embed(const QMatrix& m) {
    Eigen::MatrixXcd z(2 * m.rows(), 2 * m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Quaternion& q = m(i, j);
            std::complex<double> z1{q.x0, q.x3}, z2{q.x1, q.x2};
            z(2 * i, 2 * j) = z1;
            z(2 * i, 2 * j + 1) = z2;
            z(2 * i + 1, 2 * j) = -std::conj(z2);
            z(2 * i + 1, 2 * j + 1) = std::conj(z1);
        }
    return z;
}

QMatrix oracle_unembed(const Eigen::MatrixXcd& z) {
    QMatrix m(static_cast<int>(z.rows() / 2), static_cast<int>(z.cols() / 2));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            std::complex<double> z1 = z(2 * i, 2 * j), z2 = z(2 * i, 2 * j + 1);
            m(i, j) = Quaternion{z1.real(), z2.real(), z2.imag(), z1.imag()};
        }
    return m;
}

// Independent exponential: native quaternion scaling-and-squaring Taylor
// series, no complex embedding involved.
QMatrix oracle_expm(const QMatrix& a) {
    int squarings = 0;
    double norm = fro_norm(a);
    while (norm > 0.25) {
        norm /= 2;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    QMatrix x = scale * a;
    QMatrix result = QMatrix::identity(a.rows());
    QMatrix term = QMatrix::identity(a.rows());
    for (int k = 1; k <= 30; ++k) {
        term = (1.0 / k) * (term * x);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

} // namespace

TEST_CASE("matmul: identity is neutral") {
    QMatrix m = random_tangent(3, 4, 99);
    CHECK(QMatrix::identity(3) * m == m);
    CHECK(m * QMatrix::identity(4) == m);
}

TEST_CASE("matmul: dimension mismatch is an error") {
    QMatrix a(2, 3), b(2, 3);
    CHECK_THROWS_AS(matmul(a, b), DimensionError);
}

TEST_CASE("matmul agrees with the complex-embedding oracle") {
    QMatrix a = random_tangent(3, 3, 1);
    QMatrix b = random_tangent(3, 3, 2);
    QMatrix want = oracle_unembed(oracle_embed(a) * oracle_embed(b));
    CHECK(fro_norm(a * b - want) / fro_norm(want) <= 1e-13);
}

TEST_CASE("adjoint of a product reverses factors") {
    QMatrix a = random_tangent(3, 4, 5);
    QMatrix b = random_tangent(4, 2, 6);
    QMatrix lhs = adjoint(a * b);
    QMatrix rhs = adjoint(b) * adjoint(a);
    CHECK(fro_norm(lhs - rhs) <= 1e-14 * std::max(1.0, fro_norm(lhs)));
    QMatrix m = random_tangent(3, 5, 7);
    CHECK(adjoint(adjoint(m)) == m);
}

TEST_CASE("embed: identity maps to identity") {
    Eigen::MatrixXcd z = embed(QMatrix::identity(3));
    CHECK((z - Eigen::MatrixXcd::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("embed is an algebra homomorphism, 100 seeded pairs up to 4x4") {
    for (std::uint64_t t = 0; t < 100; ++t) {
        int n = 1 + static_cast<int>(t % 4);
        QMatrix a = random_tangent(n, n, 1000 + t);
        QMatrix b = random_tangent(n, n, 2000 + t);
        Eigen::MatrixXcd lhs = embed(a * b);
        Eigen::MatrixXcd rhs = embed(a) * embed(b);
        CHECK((lhs - rhs).norm() / rhs.norm() <= 1e-13);
        CHECK((embed(adjoint(a)) - embed(a).adjoint()).norm() == 0.0);
        CHECK((embed(a + b) - (embed(a) + embed(b))).norm() == 0.0);
    }
}

TEST_CASE("unembed(embed(M)) = M exactly") {
    QMatrix m = random_tangent(3, 5, 77);
    CHECK(unembed(embed(m)) == m);
}

TEST_CASE("unembed rejects structure violations") {
    Eigen::MatrixXcd z = embed(QMatrix::identity(2));
    z(1, 1) += std::complex<double>(1e-6, 0);
    CHECK_THROWS_AS(unembed(z), ValidationError);
}

TEST_CASE("q_inverse: identity, seeded residual, singular rejection") {
    CHECK(fro_norm(q_inverse(QMatrix::identity(4)) - QMatrix::identity(4)) <= 1e-15);

    QMatrix m = random_tangent(3, 3, 8);
    QMatrix inv = q_inverse(m);
    CHECK(fro_norm(m * inv - QMatrix::identity(3)) <= 1e-12);
    CHECK(fro_norm(inv * m - QMatrix::identity(3)) <= 1e-12);

    QMatrix sing = random_tangent(3, 3, 9);
    for (int j = 0; j < 3; ++j) sing(2, j) = sing(0, j); // repeated row
    CHECK_THROWS_AS(q_inverse(sing), SingularMatrixError);
}

TEST_CASE("q_expm(0) is the identity") {
    SpElement e = q_expm(SpAlgebraElement::zeros(3));
    CHECK(fro_norm(e.mat() - QMatrix::identity(3)) <= 1e-15);
}

TEST_CASE("q_expm: one-parameter group property, s=0.3 t=0.5") {
    SpAlgebraElement a = random_skew(3, 4);
    auto scaled = [&](double s) { return q_expm(SpAlgebraElement(s * a.mat())); };
    QMatrix lhs = scaled(0.8).mat();
    QMatrix rhs = scaled(0.3).mat() * scaled(0.5).mat();
    CHECK(fro_norm(lhs - rhs) <= 1e-10);
}

TEST_CASE("q_expm: unitarity for 20 seeded skew elements up to 4x4") {
    for (std::uint64_t t = 0; t < 20; ++t) {
        int n = 1 + static_cast<int>(t % 4);
        SpElement g = q_expm(random_skew(n, 300 + t));
        CHECK(fro_norm(g.mat() * adjoint(g.mat()) - QMatrix::identity(n)) <= 1e-11);
    }
}

TEST_CASE("q_expm matches a native quaternion Taylor exponential") {
    for (std::uint64_t t = 0; t < 10; ++t) {
        int n = 2 + static_cast<int>(t % 3);
        SpAlgebraElement a = random_skew(n, 400 + t);
        QMatrix got = q_expm(a).mat();
        QMatrix want = oracle_expm(a.mat());
        CHECK(fro_norm(got - want) / fro_norm(want) <= 1e-11);
    }
}

TEST_CASE("q_expm of block-diagonal input is block-diagonal") {
    SpAlgebraElement a = random_skew(2, 11);
    SpAlgebraElement b = random_skew(2, 12);
    QMatrix blk = QMatrix::zeros(4, 4);
    blk.set_block(0, 0, a.mat());
    blk.set_block(2, 2, b.mat());
    SpElement e = q_expm(SpAlgebraElement(blk));
    CHECK(fro_norm(e.mat().block(0, 2, 2, 2)) <= 1e-14);
    CHECK(fro_norm(e.mat().block(2, 0, 2, 2)) <= 1e-14);
    // and the diagonal blocks are the block exponentials
    CHECK(fro_norm(e.mat().block(0, 0, 2, 2) - q_expm(a).mat()) <= 1e-13);
    CHECK(fro_norm(e.mat().block(2, 2, 2, 2) - q_expm(b).mat()) <= 1e-13);
}

TEST_CASE("random_skew is skew exactly as stored") {
    SpAlgebraElement a = random_skew(2, 7);
    QMatrix s = a.mat();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(conj(s(j, i)) == -s(i, j));
}

TEST_CASE("random_sp lands in the group") {
    SpElement g = random_sp(3, 1);
    CHECK(fro_norm(g.mat() * adjoint(g.mat()) - QMatrix::identity(3)) <= 1e-11);
}

TEST_CASE("random generation is deterministic per seed") {
    CHECK(random_sp(3, 123).mat() == random_sp(3, 123).mat());
    CHECK(random_skew(4, 5).mat() == random_skew(4, 5).mat());
    CHECK(random_tangent(2, 3, 9) == random_tangent(2, 3, 9));
    CHECK_FALSE(random_tangent(2, 3, 9) == random_tangent(2, 3, 10));
}

TEST_CASE("SpElement closure under products") {
    SpElement g1 = random_sp(3, 21), g2 = random_sp(3, 22);
    CHECK_NOTHROW(SpElement(g1.mat() * g2.mat()));
}

TEST_CASE("SpElement rejects non-unitary input") {
    QMatrix m = QMatrix::identity(2);
    m(0, 0) = Quaternion{1 + 1e-6, 0, 0, 0};
    CHECK_THROWS_AS(SpElement{m}, ValidationError);
}

TEST_CASE("algebra commutator stays skew-Hermitian") {
    SpAlgebraElement a = random_skew(3, 31), b = random_skew(3, 32);
    SpAlgebraElement c = algebra_commutator(a, b); // validates on construction
    CHECK(fro_norm(adjoint(c.mat()) + c.mat()) == 0.0);
}

TEST_CASE("sp_dimension: j(2j+1) and the parameter count of skew matrices") {
    CHECK(sp_dimension(1) == 3);
    CHECK(sp_dimension(2) == 10);
    for (long j = 1; j <= 6; ++j) {
        // strictly upper triangle holds free quaternions, diagonal holds
        // pure-imaginary quaternions
        long count = 4 * j * (j - 1) / 2 + 3 * j;
        CHECK(count == sp_dimension(j));
    }
}
