#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagcurv/grassmann.hpp"

#include <cmath>

using namespace flagcurv;

namespace {

SpElement block_diag_sp(int k, int n, std::uint64_t seed) {
    QMatrix blk = QMatrix::zeros(k + n, k + n);
    blk.set_block(0, 0, random_skew(k, seed).mat());
    blk.set_block(k, k, random_skew(n, seed + 1).mat());
    return q_expm(SpAlgebraElement(blk));
}

double rel(const QMatrix& got, const QMatrix& want) {
    double scale = std::max(1.0, fro_norm(want));
    return fro_norm(got - want) / scale;
}

} // namespace

TEST_CASE("stiefel_from_group: identity, unitarity, block structure") {
    StiefelBlock x0 = stiefel_from_group(SpElement{QMatrix::identity(2)}, 1);
    CHECK(x0.Xk == QMatrix::identity(1));
    CHECK(fro_norm(x0.Xn) == 0.0);

    SpElement g = random_sp(5, 101);
    StiefelBlock x = stiefel_from_group(g, 2);
    QMatrix gram = x.Xk * adjoint(x.Xk) + x.Xn * adjoint(x.Xn);
    CHECK(fro_norm(gram - QMatrix::identity(2)) <= 1e-11);

    StiefelBlock xb = stiefel_from_group(block_diag_sp(2, 3, 7), 2);
    CHECK(fro_norm(xb.Xn) == 0.0);
}

TEST_CASE("grassmann_from_stiefel: chart identity 1 + YY* = (Xk* Xk)^{-1}") {
    StiefelBlock trivial{QMatrix::identity(2), QMatrix::zeros(2, 3)};
    CHECK(fro_norm(grassmann_from_stiefel(trivial).Y()) == 0.0);

    for (std::uint64_t t = 0; t < 20; ++t) {
        SpElement g = random_sp(3, 200 + t);
        StiefelBlock x = stiefel_from_group(g, 1);
        GrassmannPoint y = grassmann_from_stiefel(x);
        QMatrix lhs = QMatrix::identity(1) + y.Y() * adjoint(y.Y());
        QMatrix rhs = q_inverse(adjoint(x.Xk) * x.Xk);
        CHECK(fro_norm(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("grassmann_from_stiefel: singular Xk breaks the chart") {
    StiefelBlock bad{QMatrix::zeros(2, 2), QMatrix::identity(2)};
    CHECK_THROWS_AS(grassmann_from_stiefel(bad), ChartError);
}

TEST_CASE("lft_apply: identity acts trivially") {
    BlockedGroupElement e = BlockedGroupElement::split(SpElement{QMatrix::identity(4)}, 2);
    GrassmannPoint y(random_tangent(2, 2, 5) * 0.3);
    CHECK(fro_norm(lft_apply(e, y).Y() - y.Y()) <= 1e-15);
}

TEST_CASE("lft_apply: Y = 0 goes to B D^{-1} = -(A*)^{-1} C*") {
    for (std::uint64_t t = 0; t < 50; ++t) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(4, 300 + t), 2);
        GrassmannPoint img = lft_apply(g, GrassmannPoint::zero(2, 2));
        CHECK(rel(img.Y(), g.B() * q_inverse(g.D())) <= 1e-10);
        CHECK(rel(img.Y(), -(q_inverse(adjoint(g.A())) * adjoint(g.C()))) <= 1e-10);
        CHECK(rel(img.Y(), g.base_point().Y()) <= 1e-12);
    }
}

TEST_CASE("lft_apply: both closed forms agree on seeded calls") {
    for (std::uint64_t t = 0; t < 50; ++t) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(5, 400 + t), 2);
        GrassmannPoint y(0.5 * random_tangent(2, 3, 900 + t));
        auto [canonical, starred] = lft_apply_both(g, y);
        CHECK(rel(canonical, starred) <= 1e-9);
    }
}

TEST_CASE("lft_apply: composition law over 50 seeded pairs, k = n = 2") {
    for (std::uint64_t t = 0; t < 50; ++t) {
        SpElement g1 = random_sp(4, 500 + t), g2 = random_sp(4, 600 + t);
        BlockedGroupElement b1 = BlockedGroupElement::split(g1, 2);
        BlockedGroupElement b2 = BlockedGroupElement::split(g2, 2);
        BlockedGroupElement b21 = BlockedGroupElement::split(SpElement{g2.mat() * g1.mat()}, 2);
        GrassmannPoint y(0.4 * random_tangent(2, 2, 700 + t));
        QMatrix chained = lft_apply(b2, lft_apply(b1, y)).Y();
        QMatrix direct = lft_apply(b21, y).Y();
        CHECK(rel(chained, direct) <= 1e-9);
    }
}

TEST_CASE("lft_apply: singular CY + D breaks the chart") {
    // with C = 0 blocks this cannot happen, so build one explicitly: the
    // block-diagonal element has D invertible, then shift Y so CY+D drops rank
    QMatrix a = QMatrix::zeros(1, 1), b = QMatrix::zeros(1, 1);
    a(0, 0) = Quaternion::one();
    QMatrix c = QMatrix::zeros(1, 1), d = QMatrix::zeros(1, 1);
    // [[0,1],[-1,0]]-style rotation in Sp(2): A=0 fails, so use the swap element
    QMatrix swap = QMatrix::zeros(2, 2);
    swap(0, 1) = Quaternion::one();
    swap(1, 0) = -Quaternion::one();
    BlockedGroupElement g = BlockedGroupElement::split(SpElement{swap}, 1);
    // C = -1, D = 0: CY + D = -Y, singular at Y = 0
    CHECK_THROWS_AS(lft_apply(g, GrassmannPoint::zero(1, 1)), ChartError);
}

TEST_CASE("lft_pushforward: identity element, finite-difference convergence") {
    BlockedGroupElement e = BlockedGroupElement::split(SpElement{QMatrix::identity(3)}, 1);
    GrassmannPoint y(0.3 * random_tangent(1, 2, 3));
    QMatrix u = random_tangent(1, 2, 4);
    CHECK(fro_norm(lft_pushforward(e, y, u) - u) <= 1e-15);

    BlockedGroupElement g = BlockedGroupElement::split(random_sp(3, 800), 1);
    QMatrix push = lft_pushforward(g, y, u);
    auto fd_error = [&](double t) {
        GrassmannPoint yp(y.Y() + t * u), ym(y.Y() - t * u);
        QMatrix fd = (1.0 / (2 * t)) * (lft_apply(g, yp).Y() - lft_apply(g, ym).Y());
        return fro_norm(fd - push);
    };
    double e1 = fd_error(1e-3), e2 = fd_error(5e-4);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2)); // second order
}

TEST_CASE("lft_pushforward is linear in the tangent") {
    BlockedGroupElement g = BlockedGroupElement::split(random_sp(4, 21), 2);
    GrassmannPoint y(0.3 * random_tangent(2, 2, 22));
    QMatrix u = random_tangent(2, 2, 23), v = random_tangent(2, 2, 24);
    QMatrix lhs = lft_pushforward(g, y, u + 2.5 * v);
    QMatrix rhs = lft_pushforward(g, y, u) + 2.5 * lft_pushforward(g, y, v);
    CHECK(rel(lhs, rhs) <= 1e-13);
}

TEST_CASE("companion identities for 1 + YY* under the action") {
    for (std::uint64_t t = 0; t < 20; ++t) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(4, 950 + t), 2);
        QMatrix Y = 0.5 * random_tangent(2, 2, 850 + t);
        GrassmannPoint y(Y);
        QMatrix Yh = lft_apply(g, y).Y();
        QMatrix ik = QMatrix::identity(2);

        QMatrix lhs1 = ik + Yh * adjoint(Yh);
        QMatrix m1 = q_inverse(adjoint(g.A()) - Y * adjoint(g.B()));
        QMatrix rhs1 = m1 * (ik + Y * adjoint(Y)) * q_inverse(g.A() - g.B() * adjoint(Y));
        CHECK(fro_norm(lhs1 - rhs1) <= 1e-9);

        QMatrix lhs2 = ik + adjoint(Yh) * Yh;
        QMatrix m2 = q_inverse(adjoint(Y) * adjoint(g.C()) + adjoint(g.D()));
        QMatrix rhs2 = m2 * (ik + adjoint(Y) * Y) * q_inverse(g.C() * Y + g.D());
        CHECK(fro_norm(lhs2 - rhs2) <= 1e-9);
    }
}

TEST_CASE("metric_eval: unit tangent at the origin") {
    QMatrix e11 = QMatrix::zeros(1, 1);
    e11(0, 0) = Quaternion::one();
    CHECK(metric_eval(GrassmannPoint::zero(1, 1), e11, e11) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("metric_eval: symmetric bilinear, positive definite") {
    GrassmannPoint y(0.4 * random_tangent(2, 3, 31));
    QMatrix u = random_tangent(2, 3, 32), v = random_tangent(2, 3, 33);
    CHECK(metric_eval(y, u, v) == doctest::Approx(metric_eval(y, v, u)).epsilon(1e-12));
    CHECK(metric_eval(y, u, u) > 0.0);
    double lhs = metric_eval(y, u + 2.0 * v, u + 2.0 * v);
    double rhs = metric_eval(y, u, u) + 4.0 * metric_eval(y, u, v) + 4.0 * metric_eval(y, v, v);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("metric invariance under the group action, 100 seeded trials") {
    for (std::uint64_t t = 0; t < 100; ++t) {
        int k = 1 + static_cast<int>(t % 2), n = 2;
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(k + n, 1100 + t), k);
        GrassmannPoint y(0.4 * random_tangent(k, n, 1200 + t));
        QMatrix u = random_tangent(k, n, 1300 + t);
        GrassmannPoint yh = lft_apply(g, y);
        QMatrix uh = lft_pushforward(g, y, u);
        double before = metric_eval(y, u, u);
        double after = metric_eval(yh, uh, uh);
        CHECK(std::abs(after - before) / before <= 1e-9);
    }
}

TEST_CASE("dimensions: chart, ambient and fiber counts") {
    GrassmannDims d11 = dimensions(1, 1);
    CHECK(d11.dim_Y == 4);
    CHECK(d11.dim_X == 7);
    CHECK(d11.dim_fiber == 3);
    CHECK(dimensions(2, 3).dim_Y == 24);
    for (int k = 1; k <= 4; ++k)
        for (int n = k; n <= 4; ++n) {
            GrassmannDims d = dimensions(k, n);
            CHECK(d.dim_X - d.dim_fiber == d.dim_Y);
            CHECK(d.dim_fiber == sp_dimension(k));
        }
}

TEST_CASE("1 + YY* has embedded eigenvalues >= 1 for chart points") {
    for (std::uint64_t t = 0; t < 25; ++t) {
        SpElement g = random_sp(4, 50 + t);
        // construction validates the eigenvalue bound
        CHECK_NOTHROW(grassmann_from_stiefel(stiefel_from_group(g, 2)));
    }
}
