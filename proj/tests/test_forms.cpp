#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagcurv/forms.hpp"
#include "flagcurv/random.hpp"

#include <cmath>

using namespace flagcurv;

namespace {

CurvePatch seeded_patch(int n, std::uint64_t seed) {
    return CurvePatch(random_sp(n, seed), random_skew(n, seed + 1), random_skew(n, seed + 2));
}

SpAlgebraElement block_diag_skew(const std::vector<int>& parts, std::uint64_t seed) {
    int total = 0;
    for (int p : parts) total += p;
    QMatrix m = QMatrix::zeros(total, total);
    int off = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        m.set_block(off, off, random_skew(parts[i], seed + i).mat());
        off += parts[i];
    }
    return SpAlgebraElement(m);
}

CurvePatch block_diag_patch(const std::vector<int>& parts, std::uint64_t seed) {
    return CurvePatch(q_expm(block_diag_skew(parts, seed)), block_diag_skew(parts, seed + 10),
                      block_diag_skew(parts, seed + 20));
}

} // namespace

TEST_CASE("connection_eval: omega = A at the identity") {
    SpAlgebraElement a = random_skew(3, 1);
    ConnectionValue w =
        connection_eval(SpElement{QMatrix::identity(3)}, a.mat(), Partition{1, 2});
    CHECK(w.omega == a.mat());
}

TEST_CASE("connection_eval: block-diagonal data keeps omega block-diagonal") {
    Partition p{2, 2};
    SpElement g = q_expm(block_diag_skew({2, 2}, 5));
    SpAlgebraElement a = block_diag_skew({2, 2}, 8);
    ConnectionValue w = connection_eval(g, a.mat() * g.mat(), p);
    CHECK(fro_norm(w.block(0, 1)) <= 1e-13);
    CHECK(fro_norm(w.block(1, 0)) <= 1e-13);
}

TEST_CASE("connection_eval: tangents give skew values, non-tangents are rejected") {
    SpElement g = random_sp(3, 9);
    QMatrix v = random_skew(3, 10).mat() * g.mat();
    ConnectionValue w = connection_eval(g, v, Partition{1, 2});
    CHECK(fro_norm(adjoint(w.omega) + w.omega) <= 1e-11);
    CHECK_THROWS_AS(connection_eval(g, random_tangent(3, 3, 11), Partition{1, 2}),
                    ValidationError);
}

TEST_CASE("mc2_residual: seeded patches converge at second order") {
    for (int n : {2, 3, 4}) {
        CurvePatch patch = seeded_patch(n, 40 + n);
        Partition p = (n == 2) ? Partition{1, 1} : (n == 3 ? Partition{1, 2} : Partition{2, 2});
        double r1 = mc2_residual(patch, p, 1e-3);
        double r2 = mc2_residual(patch, p, 5e-4);
        CHECK(r1 <= (n == 2 ? 1e-5 : 1e-4));
        CHECK(r1 / r2 >= 3.5);
        CHECK(r1 / r2 <= 4.5);
    }
}

TEST_CASE("mc2_residual: constant patch has zero residual") {
    SpElement g0 = random_sp(2, 3);
    CurvePatch patch(g0, SpAlgebraElement::zeros(2), SpAlgebraElement::zeros(2));
    CHECK(mc2_residual(patch, Partition{1, 1}, 1e-3) == 0.0);
}

TEST_CASE("mc2_residual: step validation") {
    CurvePatch patch = seeded_patch(2, 77);
    CHECK_THROWS_AS(mc2_residual(patch, Partition{1, 1}, 1e-1), ConfigError);
    CHECK_THROWS_AS(mc2_residual(patch, Partition{1, 1}, 1e-7), ConfigError);
}

TEST_CASE("curvature_block: vanishes on block-diagonal patches") {
    Partition p{1, 3};
    CurvePatch patch = block_diag_patch({1, 3}, 100);
    for (int mu = 0; mu < 2; ++mu) {
        TwoFormValue omega = curvature_block(patch, p, mu, 1e-3);
        CHECK(fro_norm(omega.value) <= 1e-13);
    }
}

TEST_CASE("curvature_block: algebraic sum equals the finite-difference obstruction") {
    CurvePatch patch2 = seeded_patch(2, 200);
    CurvatureBlockDetail d = curvature_block_detail(patch2, Partition{1, 1}, 0, 1e-3);
    CHECK(d.agreement <= 1e-5);

    CurvePatch patch4 = seeded_patch(4, 300);
    Partition p13{1, 3};
    for (int mu = 0; mu < 2; ++mu) {
        CurvatureBlockDetail d4 = curvature_block_detail(patch4, p13, mu, 1e-3);
        CHECK(d4.agreement <= std::max(10.0 * d4.mc2_reference, 1e-8));
        TwoFormValue v = curvature_block(patch4, p13, mu, 1e-3);
        CHECK(fro_norm(adjoint(v.value) + v.value) <= 1e-11);
    }
}

TEST_CASE("curvature_block: index range is checked") {
    CurvePatch patch = seeded_patch(2, 1);
    CHECK_THROWS_AS(curvature_block(patch, Partition{1, 1}, 2, 1e-3), DimensionError);
}

TEST_CASE("curvature_closed_form: antisymmetry and equality with the patch value") {
    // u = v kills both closed forms exactly
    BlockedGroupElement g = BlockedGroupElement::split(random_sp(3, 21), 1);
    GrassmannPoint y = g.base_point();
    QMatrix u = random_tangent(1, 2, 22);
    auto [o1, o2] = curvature_closed_form(g, y, u, u);
    CHECK(fro_norm(o1.value) == 0.0);
    CHECK(fro_norm(o2.value) == 0.0);

    // Omega_mu from a patch through g equals the closed form on the chart
    // velocities of the patch's coordinate fields
    for (std::uint64_t t = 0; t < 10; ++t) {
        SpElement g0 = random_sp(3, 500 + t);
        SpAlgebraElement va = random_skew(3, 600 + t), vb = random_skew(3, 700 + t);
        CurvePatch patch(g0, va, vb);
        Partition p{1, 2};
        BlockedGroupElement blk = BlockedGroupElement::split(g0, 1);
        GrassmannPoint y0 = blk.base_point();
        QMatrix ys = chart_velocity(g0, va, 1);
        QMatrix yt = chart_velocity(g0, vb, 1);
        auto [c1, c2] = curvature_closed_form(blk, y0, ys, yt);
        TwoFormValue b1 = curvature_block(patch, p, 0, 1e-3);
        TwoFormValue b2 = curvature_block(patch, p, 1, 1e-3);
        CHECK(fro_norm(c1.value - b1.value) <= 1e-5);
        CHECK(fro_norm(c2.value - b2.value) <= 1e-5);
    }
}

TEST_CASE("ricci_forms: hand value, antisymmetry, vanishing real part") {
    QMatrix u(1, 1), v(1, 1);
    u(0, 0) = Quaternion::one();
    v(0, 0) = Quaternion{0, 1, 0, 0};
    auto [r1, r2] = ricci_forms(GrassmannPoint::zero(1, 1), u, v);
    CHECK(r1 == Quaternion{0, -2, 0, 0});
    CHECK(r2 == Quaternion{0, 2, 0, 0});

    auto [z1, z2] = ricci_forms(GrassmannPoint::zero(1, 1), u, u);
    CHECK(z1 == Quaternion::zero());
    CHECK(z2 == Quaternion::zero());

    for (std::uint64_t t = 0; t < 50; ++t) {
        GrassmannPoint y(0.5 * random_tangent(2, 2, 800 + t));
        QMatrix a = random_tangent(2, 2, 900 + t), b = random_tangent(2, 2, 950 + t);
        auto [f, g2] = ricci_forms(y, a, b);
        auto [fr, gr] = ricci_forms(y, b, a);
        CHECK(std::abs(f.x0) <= 1e-11);
        CHECK(std::abs(g2.x0) <= 1e-11);
        CHECK(fr == -f);
        CHECK(gr == -g2);
    }
}

TEST_CASE("torsion identity: w = 0 collapses, seeded trials stay below 1e-9") {
    BlockedGroupElement g = BlockedGroupElement::split(random_sp(2, 31), 1);
    GrassmannPoint y = g.base_point();
    QMatrix u = random_tangent(1, 1, 32), v = random_tangent(1, 1, 33);
    CHECK(torsion_identity_residual(g, y, u, v, QMatrix::zeros(1, 1)) == 0.0);

    for (std::uint64_t t = 0; t < 100; ++t) {
        BlockedGroupElement g1 = BlockedGroupElement::split(random_sp(2, 1000 + t), 1);
        GrassmannPoint y1 = g1.base_point();
        double r = torsion_identity_residual(g1, y1, random_tangent(1, 1, 2000 + t),
                                             random_tangent(1, 1, 3000 + t),
                                             random_tangent(1, 1, 4000 + t));
        CHECK(r <= 1e-10);
    }
    for (std::uint64_t t = 0; t < 50; ++t) {
        BlockedGroupElement g2 = BlockedGroupElement::split(random_sp(4, 5000 + t), 2);
        GrassmannPoint y2 = g2.base_point();
        double r = torsion_identity_residual(g2, y2, random_tangent(2, 2, 6000 + t),
                                             random_tangent(2, 2, 7000 + t),
                                             random_tangent(2, 2, 8000 + t));
        CHECK(r <= 1e-9);
    }
}

TEST_CASE("gauge_transform: identity, tensoriality on patches, norm preservation") {
    Partition p{1, 2};
    SpElement id{QMatrix::identity(3)};
    QMatrix w = random_skew(3, 41).mat();
    CHECK(gauge_transform(w, id, p) == w);

    SpElement h = q_expm(block_diag_skew({1, 2}, 42));
    CHECK(std::abs(fro_norm(gauge_transform(w, h, p)) - fro_norm(w)) <=
          1e-12 * std::max(1.0, fro_norm(w)));

    SpElement notdiag = random_sp(3, 43);
    CHECK_THROWS_AS(gauge_transform(w, notdiag, p), ValidationError);

    // recomputing the connection and curvature on g(s,t) h conjugates them
    for (std::uint64_t t = 0; t < 5; ++t) {
        CurvePatch patch = seeded_patch(3, 4100 + t);
        CurvePatch gauged = patch.right_translated(h);
        QMatrix lhs = gauged.omega_s(0, 0);
        QMatrix rhs = gauge_transform(patch.omega_s(0, 0), h, p);
        CHECK(fro_norm(lhs - rhs) <= 1e-10);

        for (int mu = 0; mu < 2; ++mu) {
            QMatrix hb = h.mat().block(p.offset(mu), p.offset(mu), p.part(mu), p.part(mu));
            QMatrix want = adjoint(hb) * curvature_block(patch, p, mu, 1e-3).value * hb;
            QMatrix got = curvature_block(gauged, p, mu, 1e-3).value;
            CHECK(fro_norm(got - want) <= 1e-5);
        }
    }
}

TEST_CASE("chern_trace: repeated arguments vanish, hand value at the origin") {
    BlockedGroupElement g = BlockedGroupElement::split(SpElement{QMatrix::identity(2)}, 1);
    GrassmannPoint y0 = GrassmannPoint::zero(1, 1);
    TwoFormEvaluator omega = [&](const QMatrix& a, const QMatrix& b) {
        return curvature_closed_form(g, y0, a, b).first.value;
    };
    QMatrix one(1, 1), im(1, 1);
    one(0, 0) = Quaternion::one();
    im(0, 0) = Quaternion{0, 1, 0, 0};

    CHECK(chern_trace(omega, {one, im}, 1) == 0.0); // Re Tr(-2i)
    CHECK(chern_trace(omega, {one, one}, 1) == 0.0);

    QMatrix a = random_tangent(1, 1, 51), b = random_tangent(1, 1, 52),
            c = random_tangent(1, 1, 53);
    double repeated = chern_trace(omega, {a, a, b, c}, 2);
    CHECK(std::abs(repeated) <= 1e-12);

    double plus = chern_trace(omega, {one, im, a, b}, 2);
    double minus = chern_trace(omega, {im, one, a, b}, 2);
    CHECK(std::abs(plus + minus) <= 1e-12 * std::max(1.0, std::abs(plus)));

    CHECK_THROWS_AS(chern_trace(omega, {one, im}, 3), ValidationError);
    CHECK_THROWS_AS(chern_trace(omega, {one, im, a}, 2), DimensionError);
}

TEST_CASE("ym_curvature: hand values, pure imaginary, conjugation pullback") {
    Quaternion one = Quaternion::one(), i{0, 1, 0, 0};
    auto [o1, o2] = ym_curvature(Quaternion::zero(), one, i);
    CHECK(o1 == Quaternion{0, -2, 0, 0});
    CHECK(o2 == Quaternion{0, 2, 0, 0});

    auto [s1, s2] = ym_curvature(i, one, one);
    CHECK(s1 == Quaternion::zero());
    CHECK(s2 == Quaternion::zero());

    Rng rng(61);
    for (int t = 0; t < 100; ++t) {
        Quaternion q = rng.quaternion(), u = rng.quaternion(), v = rng.quaternion();
        auto [w1, w2] = ym_curvature(q, u, v);
        CHECK(w1.x0 == 0.0);
        CHECK(w2.x0 == 0.0);
        // dqbar ^ dq is the pullback of dq ^ dqbar under 3-space reflection
        auto [p1, p2] = ym_curvature(q, conj(u), conj(v));
        CHECK(p1 == w2);
        CHECK(p2 == w1);
    }
}

TEST_CASE("hodge_duality_sign: dq^dqbar is self-dual, dqbar^dq anti-self-dual") {
    R4TwoForm f_plus = [](const Quaternion& u, const Quaternion& v) {
        return u * conj(v) - v * conj(u);
    };
    R4TwoForm f_minus = [](const Quaternion& u, const Quaternion& v) {
        return conj(u) * v - conj(v) * u;
    };
    CHECK(hodge_duality_sign(f_plus) == 1);
    CHECK(hodge_duality_sign(f_minus) == -1);

    // scaling does not change duality
    R4TwoForm f_scaled = [&](const Quaternion& u, const Quaternion& v) {
        return 0.37 * (u * conj(v) - v * conj(u));
    };
    CHECK(hodge_duality_sign(f_scaled) == 1);

    // a single e0 ^ e1 component is neither
    R4TwoForm f_mixed = [](const Quaternion& u, const Quaternion& v) {
        return Quaternion{0, u.x0 * v.x1 - u.x1 * v.x0, 0, 0};
    };
    CHECK_THROWS_AS(hodge_duality_sign(f_mixed), MixedDualityError);
}

TEST_CASE("w12: chart derivative against the connection block") {
    for (std::uint64_t t = 0; t < 50; ++t) {
        int k = 1 + static_cast<int>(t % 2);
        SpElement g = random_sp(k + 2, 9000 + t);
        SpAlgebraElement v = random_skew(k + 2, 9100 + t);
        CHECK(w12_residual(g, v, k) <= 1e-9);
    }
}

TEST_CASE("metric equals Re Tr(omega12 omega12*) through the w12 identity") {
    for (std::uint64_t t = 0; t < 100; ++t) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(3, 9500 + t), 1);
        GrassmannPoint y = g.base_point();
        QMatrix u = random_tangent(1, 2, 9600 + t);
        QMatrix w12 = -(adjoint(g.A()) * u * g.D());
        double via_form = re_trace(w12 * adjoint(w12));
        double via_metric = metric_eval(y, u, u);
        CHECK(std::abs(via_form - via_metric) / via_metric <= 1e-9);
    }
}

TEST_CASE("offdiag_mc_residual: d(omega12) identity converges at second order") {
    CurvePatch patch = seeded_patch(3, 71);
    double r1 = offdiag_mc_residual(patch, 1, 1e-3);
    double r2 = offdiag_mc_residual(patch, 1, 5e-4);
    CHECK(r1 <= 1e-5);
    CHECK(r1 / r2 >= 3.2);
    CHECK(r1 / r2 <= 4.8);
}
