#include "flagcurv/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace flagcurv {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw ValidationError("Partition: at least one part required");
    offsets_.reserve(parts_.size());
    int off = 0;
    for (int p : parts_) {
        if (p < 1) throw ValidationError("Partition: all parts must be >= 1");
        offsets_.push_back(off);
        off += p;
    }
    total_ = off;
}

QMatrix Partition::block_of(const QMatrix& m, int a, int b) const {
    if (m.rows() != total_ || m.cols() != total_)
        throw DimensionError("Partition::block_of: matrix does not match the partition");
    return m.block(offset(a), offset(b), part(a), part(b));
}

bool Partition::is_block_diagonal(const QMatrix& m, double tol) const {
    for (int a = 0; a < count(); ++a)
        for (int b = 0; b < count(); ++b)
            if (a != b && fro_norm(block_of(m, a, b)) > tol) return false;
    return true;
}

CurvePatch::CurvePatch(SpElement g0, SpAlgebraElement a, SpAlgebraElement b)
    : g0_(std::move(g0)), a_(std::move(a)), b_(std::move(b)) {
    if (a_.dim() != g0_.dim() || b_.dim() != g0_.dim())
        throw DimensionError("CurvePatch: algebra elements must match dim(g0)");
    // spot-check that the surface stays in the group over the unit square
    SpElement corner{at(1.0, 1.0)};
    (void)corner;
}

QMatrix CurvePatch::at(double s, double t) const {
    QMatrix es = q_expm(SpAlgebraElement(s * a_.mat())).mat();
    QMatrix et = q_expm(SpAlgebraElement(t * b_.mat())).mat();
    return es * et * g0_.mat();
}

QMatrix CurvePatch::omega_s(double s, double t) const {
    QMatrix g = at(s, t);
    return adjoint(g) * a_.mat() * g; // ds g = A g
}

QMatrix CurvePatch::omega_t(double s, double t) const {
    QMatrix es = q_expm(SpAlgebraElement(s * a_.mat())).mat();
    QMatrix et = q_expm(SpAlgebraElement(t * b_.mat())).mat();
    QMatrix g = es * et * g0_.mat();
    return adjoint(g) * es * b_.mat() * et * g0_.mat(); // dt g = e^{sA} B e^{tB} g0
}

CurvePatch CurvePatch::right_translated(const SpElement& h) const {
    return CurvePatch(SpElement(g0_.mat() * h.mat()), a_, b_);
}

ConnectionValue::ConnectionValue(QMatrix w, Partition p) : omega(std::move(w)), partition(std::move(p)) {
    if (omega.rows() != partition.total() || omega.cols() != partition.total())
        throw DimensionError("ConnectionValue: omega does not match the partition");
    if (fro_norm(adjoint(omega) + omega) > 1e-10 * std::max(1.0, fro_norm(omega)))
        throw ValidationError("ConnectionValue: omega is not skew-Hermitian");
}

TwoFormValue::TwoFormValue(QMatrix v, QMatrix s, QMatrix t)
    : value(std::move(v)), arg_s(std::move(s)), arg_t(std::move(t)) {
    if (fro_norm(adjoint(value) + value) > 1e-10 * std::max(1.0, fro_norm(value)))
        throw ValidationError("TwoFormValue: value is not skew-Hermitian");
}

ConnectionValue connection_eval(const SpElement& g, const QMatrix& v, const Partition& p) {
    if (v.rows() != g.dim() || v.cols() != g.dim())
        throw DimensionError("connection_eval: tangent must match dim(g)");
    QMatrix omega = adjoint(g.mat()) * v;
    if (fro_norm(adjoint(omega) + omega) > 1e-8 * std::max(1.0, fro_norm(omega)))
        throw ValidationError("connection_eval: v is not a tangent at g (g* v not skew)");
    return ConnectionValue(std::move(omega), p);
}

namespace {

void require_step(double h) {
    if (!(h >= 1e-6 && h <= 1e-2))
        throw ConfigError("finite-difference step outside [1e-6, 1e-2]");
}

QMatrix wedge_commutator(const QMatrix& ws, const QMatrix& wt) { return ws * wt - wt * ws; }

} // namespace

QMatrix mc2_residual_matrix(const CurvePatch& patch, double h) {
    const double inv2h = 1.0 / (2.0 * h);
    QMatrix domega = inv2h * (patch.omega_t(h, 0) - patch.omega_t(-h, 0)) -
                     inv2h * (patch.omega_s(0, h) - patch.omega_s(0, -h));
    return domega + wedge_commutator(patch.omega_s(0, 0), patch.omega_t(0, 0));
}

double mc2_residual(const CurvePatch& patch, const Partition& p, double h) {
    require_step(h);
    if (p.total() != patch.dim()) throw DimensionError("mc2_residual: partition does not match patch");
    QMatrix r = mc2_residual_matrix(patch, h);
    double worst = 0;
    for (int a = 0; a < p.count(); ++a)
        for (int b = 0; b < p.count(); ++b) worst = std::max(worst, fro_norm(p.block_of(r, a, b)));
    return worst;
}

double offdiag_mc_residual(const CurvePatch& patch, int k, double h) {
    require_step(h);
    const int n = patch.dim() - k;
    if (k < 1 || n < 1) throw DimensionError("offdiag_mc_residual: 1 <= k < N required");
    QMatrix r = mc2_residual_matrix(patch, h);
    return fro_norm(r.block(0, k, k, n));
}

CurvatureBlockDetail curvature_block_detail(const CurvePatch& patch, const Partition& p, int mu,
                                            double h) {
    require_step(h);
    if (p.total() != patch.dim())
        throw DimensionError("curvature_block: partition does not match patch");
    if (mu < 0 || mu >= p.count()) throw DimensionError("curvature_block: block index out of range");

    const QMatrix ws = patch.omega_s(0, 0);
    const QMatrix wt = patch.omega_t(0, 0);

    QMatrix algebraic = QMatrix::zeros(p.part(mu), p.part(mu));
    for (int alpha = 0; alpha < p.count(); ++alpha) {
        if (alpha == mu) continue;
        QMatrix ws_ma = p.block_of(ws, mu, alpha);
        QMatrix wt_ma = p.block_of(wt, mu, alpha);
        algebraic += ws_ma * adjoint(wt_ma) - wt_ma * adjoint(ws_ma);
    }

    const double inv2h = 1.0 / (2.0 * h);
    QMatrix domega_mm = inv2h * p.block_of(patch.omega_t(h, 0) - patch.omega_t(-h, 0), mu, mu) -
                        inv2h * p.block_of(patch.omega_s(0, h) - patch.omega_s(0, -h), mu, mu);
    QMatrix fd = domega_mm + wedge_commutator(p.block_of(ws, mu, mu), p.block_of(wt, mu, mu));

    CurvatureBlockDetail d{algebraic, fd, fro_norm(algebraic - fd), mc2_residual(patch, p, h)};
    return d;
}

TwoFormValue curvature_block(const CurvePatch& patch, const Partition& p, int mu, double h) {
    CurvatureBlockDetail d = curvature_block_detail(patch, p, mu, h);
    if (d.agreement > std::max(10.0 * d.mc2_reference, 1e-8))
        throw ValidationError("curvature_block: algebraic and finite-difference values disagree");
    QMatrix arg_s = patch.a().mat() * patch.g0().mat();
    QMatrix arg_t = patch.b().mat() * patch.g0().mat();
    return TwoFormValue(std::move(d.algebraic), std::move(arg_s), std::move(arg_t));
}

namespace {

// Omega_1(u,v) = A* u (1+Y*Y)^{-1} v* A - A* v (1+Y*Y)^{-1} u* A
QMatrix closed_form_1(const BlockedGroupElement& g, const QMatrix& inner, const QMatrix& u,
                      const QMatrix& v) {
    const QMatrix as = adjoint(g.A());
    return as * u * inner * adjoint(v) * g.A() - as * v * inner * adjoint(u) * g.A();
}

// Omega_2(u,v) = D* u* (1+YY*)^{-1} v D - D* v* (1+YY*)^{-1} u D
QMatrix closed_form_2(const BlockedGroupElement& g, const QMatrix& inner, const QMatrix& u,
                      const QMatrix& v) {
    const QMatrix ds = adjoint(g.D());
    return ds * adjoint(u) * inner * v * g.D() - ds * adjoint(v) * inner * u * g.D();
}

} // namespace

std::pair<TwoFormValue, TwoFormValue> curvature_closed_form(const BlockedGroupElement& g,
                                                            const GrassmannPoint& y,
                                                            const QMatrix& u, const QMatrix& v) {
    const int k = g.k(), n = g.n();
    if (y.k() != k || y.n() != n || u.rows() != k || u.cols() != n || v.rows() != k || v.cols() != n)
        throw DimensionError("curvature_closed_form: blocks and tangents must be k x n compatible");
    const QMatrix& Y = y.Y();
    QMatrix inner_nn = q_inverse(QMatrix::identity(n) + adjoint(Y) * Y);
    QMatrix inner_kk = q_inverse(QMatrix::identity(k) + Y * adjoint(Y));
    return {TwoFormValue(closed_form_1(g, inner_nn, u, v), u, v),
            TwoFormValue(closed_form_2(g, inner_kk, u, v), u, v)};
}

std::pair<Quaternion, Quaternion> ricci_forms(const GrassmannPoint& y, const QMatrix& u,
                                              const QMatrix& v) {
    const int k = y.k(), n = y.n();
    if (u.rows() != k || u.cols() != n || v.rows() != k || v.cols() != n)
        throw DimensionError("ricci_forms: tangents must be k x n");
    const QMatrix& Y = y.Y();
    QMatrix pk = q_inverse(QMatrix::identity(k) + Y * adjoint(Y));
    QMatrix pn = q_inverse(QMatrix::identity(n) + adjoint(Y) * Y);
    Quaternion r1 = quat_trace(pk * u * pn * adjoint(v)) - quat_trace(pk * v * pn * adjoint(u));
    Quaternion r2 = quat_trace(pn * adjoint(u) * pk * v) - quat_trace(pn * adjoint(v) * pk * u);
    return {r1, r2};
}

double torsion_identity_residual(const BlockedGroupElement& g, const GrassmannPoint& y,
                                 const QMatrix& u, const QMatrix& v, const QMatrix& w) {
    const int k = g.k(), n = g.n();
    for (const QMatrix* x : {&u, &v, &w})
        if (x->rows() != k || x->cols() != n)
            throw DimensionError("torsion_identity_residual: tangents must be k x n");
    const QMatrix& Y = y.Y();
    QMatrix inner_nn = q_inverse(QMatrix::identity(n) + adjoint(Y) * Y);
    QMatrix inner_kk = q_inverse(QMatrix::identity(k) + Y * adjoint(Y));

    auto omega12 = [&](const QMatrix& x) { return -(adjoint(g.A()) * x * g.D()); };
    auto omg1 = [&](const QMatrix& x1, const QMatrix& x2) { return closed_form_1(g, inner_nn, x1, x2); };
    auto omg2 = [&](const QMatrix& x1, const QMatrix& x2) { return closed_form_2(g, inner_kk, x1, x2); };

    QMatrix lhs = omg1(u, v) * omega12(w) - omg1(u, w) * omega12(v) + omg1(v, w) * omega12(u);
    QMatrix rhs = omega12(u) * omg2(v, w) - omega12(v) * omg2(u, w) + omega12(w) * omg2(u, v);
    return fro_norm(lhs - rhs);
}

QMatrix gauge_transform(const QMatrix& omega_or_Omega, const SpElement& h, const Partition& p) {
    if (h.dim() != p.total() || omega_or_Omega.rows() != p.total() ||
        omega_or_Omega.cols() != p.total())
        throw DimensionError("gauge_transform: value, h and partition must share one N");
    if (!p.is_block_diagonal(h.mat()))
        throw ValidationError("gauge_transform: h is not block-diagonal under the partition");
    return adjoint(h.mat()) * omega_or_Omega * h.mat();
}

double chern_trace(const TwoFormEvaluator& omega, const std::vector<QMatrix>& tangents, int ell) {
    if (ell != 1 && ell != 2)
        throw ValidationError("chern_trace: only ell in {1, 2} is implemented");
    if (tangents.size() != static_cast<std::size_t>(2 * ell))
        throw DimensionError("chern_trace: 2*ell tangent arguments required");
    if (ell == 1) return re_trace(omega(tangents[0], tangents[1]));

    std::array<int, 4> idx{0, 1, 2, 3};
    double sum = 0;
    do {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (idx[i] > idx[j]) ++inversions;
        const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
        sum += sign * re_trace(omega(tangents[idx[0]], tangents[idx[1]]) *
                               omega(tangents[idx[2]], tangents[idx[3]]));
    } while (std::next_permutation(idx.begin(), idx.end()));
    return sum / 4.0; // 1/(2! 2!)
}

std::pair<Quaternion, Quaternion> ym_curvature(const Quaternion& q, const Quaternion& u,
                                               const Quaternion& v) {
    const double denom = 1.0 + norm2(q);
    const double scale = 1.0 / (denom * denom);
    Quaternion omega1 = scale * (u * conj(v) - v * conj(u));
    Quaternion omega2 = scale * (conj(u) * v - conj(v) * u);
    return {omega1, omega2};
}

int hodge_duality_sign(const R4TwoForm& form) {
    const std::array<Quaternion, 4> basis{Quaternion::one(), Quaternion{0, 1, 0, 0},
                                          Quaternion{0, 0, 1, 0}, Quaternion{0, 0, 0, 1}};
    // pair order: 01 02 03 12 13 23
    std::array<Quaternion, 6> f{};
    int p = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) f[p++] = form(basis[i], basis[j]);

    double scale = 0;
    for (const Quaternion& q : f) {
        scale = std::max(scale, qnorm(q));
        if (std::abs(q.x0) > 1e-12 * std::max(1.0, qnorm(q)))
            throw ValidationError("hodge_duality_sign: form values are not pure imaginary");
    }
    if (scale == 0) throw MixedDualityError("hodge_duality_sign: zero form has no duality sign");

    // star with orientation e0^e1^e2^e3: 01<->23, 02<->-13, 03<->12
    std::array<Quaternion, 6> star{f[5], -f[4], f[3], f[2], -f[1], f[0]};

    double err_plus = 0, err_minus = 0;
    for (int c = 0; c < 6; ++c) {
        err_plus = std::max(err_plus, qnorm(star[c] - f[c]));
        err_minus = std::max(err_minus, qnorm(star[c] + f[c]));
    }
    const double tol = 1e-9 * scale;
    if (err_plus <= tol && err_minus > tol) return +1;
    if (err_minus <= tol && err_plus > tol) return -1;
    throw MixedDualityError("hodge_duality_sign: *F is not a consistent sign times F");
}

double w12_residual(const SpElement& g, const SpAlgebraElement& v, int k) {
    const int N = g.dim();
    const int n = N - k;
    if (k < 1 || n < 1) throw DimensionError("w12_residual: 1 <= k < N required");
    BlockedGroupElement blk = BlockedGroupElement::split(g, k);

    QMatrix ydot = chart_velocity(g, v, k);
    QMatrix lhs = adjoint(blk.A()) * ydot * blk.D();

    // chart-oriented assembly: conjugate by Sigma = diag(1_k, -1_n), which
    // flips the sign of the off-diagonal connection blocks
    QMatrix omega = adjoint(g.mat()) * v.mat() * g.mat();
    QMatrix omega12_chart = -omega.block(0, k, k, n);

    return fro_norm(lhs + omega12_chart);
}

} // namespace flagcurv
