#include "flagcurv/grassmann.hpp"

#include <Eigen/Eigenvalues>

namespace flagcurv {

namespace {

constexpr double kChartCondLimit = 1e12;

// Inverse with chart semantics: singularity means the operation left the
// affine chart, not a numeric defect.
QMatrix chart_inverse(const QMatrix& m, const char* what) {
    if (embedded_cond(m) > kChartCondLimit)
        throw ChartError(std::string("chart breakdown: singular ") + what);
    return q_inverse(m);
}

} // namespace

GrassmannPoint::GrassmannPoint(QMatrix y) : y_(std::move(y)) {
    const int k = y_.rows();
    QMatrix gram = QMatrix::identity(k) + y_ * adjoint(y_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(embed(gram), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < 1.0 - 1e-10)
        throw ValidationError("GrassmannPoint: 1 + YY* has an eigenvalue below 1");
}

BlockedGroupElement::BlockedGroupElement(QMatrix a, QMatrix b, QMatrix c, QMatrix d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (!a_.is_square() || !d_.is_square() || b_.rows() != a_.rows() || b_.cols() != d_.cols() ||
        c_.rows() != d_.rows() || c_.cols() != a_.cols())
        throw DimensionError("BlockedGroupElement: incompatible block shapes");
    SpElement validate{assembled()};
    (void)validate;
}

BlockedGroupElement BlockedGroupElement::split(const SpElement& g, int k) {
    const int N = g.dim();
    if (k < 1 || k >= N) throw DimensionError("BlockedGroupElement::split: 1 <= k < N required");
    const QMatrix& m = g.mat();
    return BlockedGroupElement(m.block(0, 0, k, k), m.block(0, k, k, N - k),
                               m.block(k, 0, N - k, k), m.block(k, k, N - k, N - k));
}

QMatrix BlockedGroupElement::assembled() const {
    const int N = k() + n();
    QMatrix m(N, N);
    m.set_block(0, 0, a_);
    m.set_block(0, k(), b_);
    m.set_block(k(), 0, c_);
    m.set_block(k(), k(), d_);
    return m;
}

GrassmannPoint BlockedGroupElement::base_point() const {
    return GrassmannPoint(b_ * chart_inverse(d_, "D"));
}

StiefelBlock stiefel_from_group(const SpElement& g, int k) {
    const int N = g.dim();
    if (k < 1 || k >= N) throw DimensionError("stiefel_from_group: 1 <= k < N required");
    return {g.mat().block(0, 0, k, k), g.mat().block(0, k, k, N - k)};
}

GrassmannPoint grassmann_from_stiefel(const StiefelBlock& x) {
    return GrassmannPoint(chart_inverse(x.Xk, "Xk") * x.Xn);
}

std::pair<QMatrix, QMatrix> lft_apply_both(const BlockedGroupElement& g, const GrassmannPoint& y) {
    if (y.k() != g.k() || y.n() != g.n())
        throw DimensionError("lft_apply: point and element shapes disagree");
    const QMatrix& Y = y.Y();
    QMatrix canonical = (g.A() * Y + g.B()) * chart_inverse(g.C() * Y + g.D(), "CY + D");
    QMatrix starred = chart_inverse(adjoint(g.A()) - Y * adjoint(g.B()), "A* - Y B*") *
                      (Y * adjoint(g.D()) - adjoint(g.C()));
    return {std::move(canonical), std::move(starred)};
}

GrassmannPoint lft_apply(const BlockedGroupElement& g, const GrassmannPoint& y) {
    auto [canonical, starred] = lft_apply_both(g, y);
    const double scale = std::max(1.0, fro_norm(canonical));
    if (fro_norm(canonical - starred) > 1e-9 * scale)
        throw ValidationError("lft_apply: the two closed forms of the action disagree");
    return GrassmannPoint(canonical);
}

QMatrix lft_pushforward(const BlockedGroupElement& g, const GrassmannPoint& y, const QMatrix& u) {
    if (u.rows() != g.k() || u.cols() != g.n())
        throw DimensionError("lft_pushforward: tangent must be k x n");
    const QMatrix& Y = y.Y();
    QMatrix left = chart_inverse(adjoint(g.A()) - Y * adjoint(g.B()), "A* - Y B*");
    QMatrix right = chart_inverse(g.C() * Y + g.D(), "CY + D");
    return left * u * right;
}

double metric_eval(const GrassmannPoint& y, const QMatrix& u, const QMatrix& v) {
    const int k = y.k(), n = y.n();
    if (u.rows() != k || u.cols() != n || v.rows() != k || v.cols() != n)
        throw DimensionError("metric_eval: tangents must be k x n");
    const QMatrix& Y = y.Y();
    QMatrix left = q_inverse(QMatrix::identity(k) + Y * adjoint(Y));
    QMatrix right = q_inverse(QMatrix::identity(n) + adjoint(Y) * Y);
    return re_trace(left * u * right * adjoint(v));
}

QMatrix chart_velocity(const SpElement& g, const SpAlgebraElement& v, int k) {
    const int N = g.dim();
    const int n = N - k;
    if (k < 1 || n < 1) throw DimensionError("chart_velocity: 1 <= k < N required");
    if (v.dim() != N) throw DimensionError("chart_velocity: V must match dim(g)");
    QMatrix gdot = v.mat() * g.mat();
    QMatrix dinv = chart_inverse(g.mat().block(k, k, n, n), "D");
    QMatrix Y = g.mat().block(0, k, k, n) * dinv;
    return (gdot.block(0, k, k, n) - Y * gdot.block(k, k, n, n)) * dinv;
}

GrassmannDims dimensions(int k, int n) {
    if (k < 1 || n < 1) throw DimensionError("dimensions: k, n >= 1 required");
    const long kl = k, nl = n;
    return {4 * kl * nl, 4 * kl * nl + 2 * kl * kl + kl, kl * (2 * kl + 1)};
}

} // namespace flagcurv
