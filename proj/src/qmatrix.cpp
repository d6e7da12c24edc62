#include "flagcurv/qmatrix.hpp"

#include "flagcurv/random.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace flagcurv {

QMatrix::QMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DimensionError("QMatrix: negative shape");
    data_.resize(static_cast<std::size_t>(rows) * cols);
}

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Quaternion::one();
    return m;
}

QMatrix QMatrix::zeros(int rows, int cols) { return QMatrix(rows, cols); }

QMatrix QMatrix::operator-() const {
    QMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
    return r;
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("QMatrix +: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("QMatrix -: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) { return matmul(a, b); }

QMatrix operator*(double s, const QMatrix& m) {
    QMatrix r(m.rows_, m.cols_);
    for (std::size_t i = 0; i < m.data_.size(); ++i) r.data_[i] = s * m.data_[i];
    return r;
}

QMatrix operator*(const Quaternion& q, const QMatrix& m) {
    QMatrix r(m.rows_, m.cols_);
    for (std::size_t i = 0; i < m.data_.size(); ++i) r.data_[i] = q * m.data_[i];
    return r;
}

QMatrix operator*(const QMatrix& m, const Quaternion& q) {
    QMatrix r(m.rows_, m.cols_);
    for (std::size_t i = 0; i < m.data_.size(); ++i) r.data_[i] = m.data_[i] * q;
    return r;
}

QMatrix QMatrix::block(int i0, int j0, int r, int c) const {
    if (i0 < 0 || j0 < 0 || i0 + r > rows_ || j0 + c > cols_)
        throw DimensionError("QMatrix::block out of range");
    QMatrix out(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
    return out;
}

void QMatrix::set_block(int i0, int j0, const QMatrix& sub) {
    if (i0 < 0 || j0 < 0 || i0 + sub.rows() > rows_ || j0 + sub.cols() > cols_)
        throw DimensionError("QMatrix::set_block out of range");
    for (int i = 0; i < sub.rows(); ++i)
        for (int j = 0; j < sub.cols(); ++j) (*this)(i0 + i, j0 + j) = sub(i, j);
}

QMatrix adjoint(const QMatrix& m) {
    QMatrix r(m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(j, i) = conj(m(i, j));
    return r;
}

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions disagree");
    QMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const Quaternion& aik = a(i, k);
            for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

double fro_norm(const QMatrix& m) {
    double s = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s += norm2(m(i, j));
    return std::sqrt(s);
}

double re_trace(const QMatrix& m) {
    if (!m.is_square()) throw DimensionError("re_trace: square matrix required");
    double s = 0;
    for (int i = 0; i < m.rows(); ++i) s += m(i, i).x0;
    return s;
}

Quaternion quat_trace(const QMatrix& m) {
    if (!m.is_square()) throw DimensionError("quat_trace: square matrix required");
    Quaternion s;
    for (int i = 0; i < m.rows(); ++i) s += m(i, i);
    return s;
}

Eigen::MatrixXcd embed(const QMatrix& m) {
    Eigen::MatrixXcd z(2 * m.rows(), 2 * m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            const M2CRep b = to_m2c(m(i, j));
            z(2 * i, 2 * j) = b.z1;
            z(2 * i, 2 * j + 1) = b.z2;
            z(2 * i + 1, 2 * j) = -std::conj(b.z2);
            z(2 * i + 1, 2 * j + 1) = std::conj(b.z1);
        }
    }
    return z;
}

QMatrix unembed(const Eigen::MatrixXcd& z, double tol) {
    if (z.rows() % 2 != 0 || z.cols() % 2 != 0)
        throw DimensionError("unembed: odd-sized complex matrix");
    const int rows = static_cast<int>(z.rows() / 2);
    const int cols = static_cast<int>(z.cols() / 2);
    QMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const std::complex<double> z1 = z(2 * i, 2 * j);
            const std::complex<double> z2 = z(2 * i, 2 * j + 1);
            const std::complex<double> c = z(2 * i + 1, 2 * j);
            const std::complex<double> d = z(2 * i + 1, 2 * j + 1);
            const double defect = std::abs(c + std::conj(z2)) + std::abs(d - std::conj(z1));
            if (defect > tol)
                throw ValidationError("unembed: quaternion structure constraint violated");
            m(i, j) = from_m2c(M2CRep{z1, z2});
        }
    }
    return m;
}

double embedded_cond(const QMatrix& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(embed(m));
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0.0;
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

namespace {

// Nearest quaternion-structured matrix: averages the two copies each entry
// has in the embedding. Exact on exactly-embedded input.
QMatrix unembed_project(const Eigen::MatrixXcd& z) {
    const int rows = static_cast<int>(z.rows() / 2);
    const int cols = static_cast<int>(z.cols() / 2);
    QMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const std::complex<double> z1 = 0.5 * (z(2 * i, 2 * j) + std::conj(z(2 * i + 1, 2 * j + 1)));
            const std::complex<double> z2 = 0.5 * (z(2 * i, 2 * j + 1) - std::conj(z(2 * i + 1, 2 * j)));
            m(i, j) = from_m2c(M2CRep{z1, z2});
        }
    return m;
}

} // namespace

QMatrix q_inverse(const QMatrix& m) {
    if (!m.is_square()) throw DimensionError("q_inverse: square matrix required");
    Eigen::MatrixXcd z = embed(m);
    const double cond = embedded_cond(m);
    if (!(cond <= 1e12))
        throw SingularMatrixError("q_inverse: embedded condition number exceeds 1e12");
    Eigen::MatrixXcd inv =
        Eigen::PartialPivLU<Eigen::MatrixXcd>(z).solve(Eigen::MatrixXcd::Identity(z.rows(), z.cols()));
    return unembed_project(inv);
}

SpElement::SpElement(QMatrix m, double tol) : mat_(std::move(m)) {
    if (!mat_.is_square()) throw ValidationError("SpElement: square matrix required");
    const QMatrix defect = mat_ * adjoint(mat_) - QMatrix::identity(mat_.rows());
    if (fro_norm(defect) > tol)
        throw ValidationError("SpElement: gg* - 1 exceeds tolerance " + std::to_string(tol));
}

SpAlgebraElement::SpAlgebraElement(QMatrix m) : mat_(std::move(m)) {
    if (!mat_.is_square()) throw ValidationError("SpAlgebraElement: square matrix required");
    for (int i = 0; i < mat_.rows(); ++i)
        for (int j = 0; j < mat_.cols(); ++j)
            if (conj(mat_(j, i)) != -mat_(i, j))
                throw ValidationError("SpAlgebraElement: matrix is not skew-Hermitian as stored");
}

SpAlgebraElement SpAlgebraElement::project(const QMatrix& m) {
    if (!m.is_square()) throw DimensionError("skew projection: square matrix required");
    QMatrix s(m.rows(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            Quaternion d = m(i, j) - conj(m(j, i));
            s(i, j) = 0.5 * d;
        }
    // force exact mirror symmetry against rounding in (i,j)/(j,i) pairs
    for (int i = 0; i < s.rows(); ++i)
        for (int j = i; j < s.cols(); ++j) s(j, i) = -conj(s(i, j));
    return SpAlgebraElement(s);
}

SpElement q_expm(const SpAlgebraElement& a) {
    Eigen::MatrixXcd e = embed(a.mat()).exp();
    return SpElement(unembed(e));
}

SpAlgebraElement algebra_commutator(const SpAlgebraElement& a, const SpAlgebraElement& b) {
    return SpAlgebraElement::project(a.mat() * b.mat() - b.mat() * a.mat());
}

SpAlgebraElement random_skew(int n, std::uint64_t seed) {
    if (n < 1) throw DimensionError("random_skew: n >= 1 required");
    Rng rng(seed);
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.quaternion();
    return SpAlgebraElement::project(m);
}

SpElement random_sp(int n, std::uint64_t seed) { return q_expm(random_skew(n, seed)); }

QMatrix random_tangent(int rows, int cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw DimensionError("random_tangent: positive shape required");
    Rng rng(seed);
    QMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.quaternion();
    return m;
}

long sp_dimension(long j) {
    if (j < 1) throw DimensionError("sp_dimension: j >= 1 required");
    return j * (2 * j + 1);
}

std::string to_string(const Quaternion& q) {
    std::ostringstream os;
    os << "(" << q.x0 << ", " << q.x1 << ", " << q.x2 << ", " << q.x3 << ")";
    return os.str();
}

std::string to_string(const QMatrix& m) {
    std::ostringstream os;
    for (int i = 0; i < m.rows(); ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < m.cols(); ++j) os << to_string(m(i, j)) << (j + 1 < m.cols() ? ", " : "");
        os << (i + 1 < m.rows() ? "\n" : "]");
    }
    return os.str();
}

std::string to_string(const GaussianRational& a) {
    std::ostringstream os;
    os << a.re.str();
    if (a.im != 0) os << (a.im > 0 ? "+" : "") << a.im.str() << "i";
    return os.str();
}

} // namespace flagcurv
