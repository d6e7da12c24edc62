#include "flagcurv/liealg.hpp"

#include "flagcurv/random.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flagcurv {

// ---------------------------------------------------------------------------
// PolyRing
// ---------------------------------------------------------------------------

PolyRing::PolyRing(int k, int n) : k_(k), n_(n) {
    if (k < 1 || n < 1) throw ValidationError("PolyRing: k, n >= 1 required");
    if (k * n > 4)
        throw ConfigError("PolyRing: k n <= 4 required (16 symbols fit one 64-bit key)");
}

int PolyRing::base(int mu, int t) const {
    if (mu < 0 || mu >= k_ || t < 0 || t >= n_) throw DimensionError("PolyRing: pair index out of range");
    return 4 * (mu * n_ + t);
}

std::string PolyRing::symbol_name(int s) const {
    static const char* kind[] = {"z1", "z2", "w1", "w2"};
    int pair = s / 4;
    std::ostringstream os;
    os << kind[s % 4] << "_" << pair / n_ + 1 << pair % n_ + 1;
    return os.str();
}

namespace {

void check_row_col(const PolyRing& r, int alpha, int a) {
    if (alpha < 0 || alpha >= r.rows() || a < 0 || a >= r.cols())
        throw DimensionError("PolyRing: index out of range");
}

} // namespace

PolyRing::Signed PolyRing::zeta(int alpha, int a) const {
    check_row_col(*this, alpha, a);
    const int mu = alpha / 2, t = a / 2;
    switch ((alpha % 2) * 2 + a % 2) {
        case 0: return {+1, z1(mu, t)};
        case 1: return {+1, z2(mu, t)};
        case 2: return {-1, w2(mu, t)};
        default: return {+1, w1(mu, t)};
    }
}

PolyRing::Signed PolyRing::zeta_bar(int alpha, int a) const {
    Signed s = zeta(alpha, a);
    return {s.sign, conj_symbol(s.symbol)};
}

PolyRing::Signed PolyRing::d(int alpha, int a) const {
    Signed s = zeta(alpha, a);
    return s; // derivative with respect to the same signed symbol
}

PolyRing::Signed PolyRing::d_bar(int alpha, int a) const {
    Signed s = zeta_bar(alpha, a);
    return s;
}

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

namespace {

inline int nibble(Monomial m, int s) { return static_cast<int>((m >> (4 * s)) & 0xF); }

} // namespace

int monomial_degree(Monomial m, int symbol_count) {
    int d = 0;
    for (int s = 0; s < symbol_count; ++s) d += nibble(m, s);
    return d;
}

Polynomial Polynomial::constant(const PolyRing& ring, GaussianRational c) {
    Polynomial p(&ring);
    p.add_term(0, c);
    return p;
}

Polynomial Polynomial::symbol(const PolyRing& ring, int s) {
    return monomial(ring, Monomial(1) << (4 * s), GaussianRational(1));
}

Polynomial Polynomial::monomial(const PolyRing& ring, Monomial key, GaussianRational c) {
    Polynomial p(&ring);
    p.add_term(key, c);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [key, c] : terms_)
        d = std::max(d, monomial_degree(key, ring_->symbol_count()));
    return d;
}

void Polynomial::add_term(Monomial key, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (!(*ring_ == *o.ring_)) throw ValidationError("Polynomial: ring mismatch");
    for (const auto& [key, c] : o.terms_) add_term(key, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (!(*ring_ == *o.ring_)) throw ValidationError("Polynomial: ring mismatch");
    for (const auto& [key, c] : o.terms_) add_term(key, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (!(*a.ring_ == *b.ring_)) throw ValidationError("Polynomial: ring mismatch");
    Polynomial out(a.ring_);
    // exponents stay far below the 4-bit nibble bound at the degrees the
    // checks use (<= 7), so plain key addition is safe
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) out.add_term(ka + kb, ca * cb);
    return out;
}

Polynomial Polynomial::scaled(const GaussianRational& c) const {
    Polynomial out(ring_);
    if (c.is_zero()) return out;
    for (const auto& [key, v] : terms_) out.terms_.emplace(key, v * c);
    return out;
}

Polynomial Polynomial::derivative(int s) const {
    if (s < 0 || s >= ring_->symbol_count()) throw DimensionError("derivative: bad symbol");
    Polynomial out(ring_);
    for (const auto& [key, c] : terms_) {
        const int e = nibble(key, s);
        if (e == 0) continue;
        out.add_term(key - (Monomial(1) << (4 * s)), c * GaussianRational(e));
    }
    return out;
}

Polynomial Polynomial::conjugated() const {
    Polynomial out(ring_);
    const int S = ring_->symbol_count();
    for (const auto& [key, c] : terms_) {
        Monomial swapped = 0;
        for (int s = 0; s < S; ++s)
            swapped |= static_cast<Monomial>(nibble(key, s)) << (4 * ring_->conj_symbol(s));
        out.add_term(swapped, conj(c));
    }
    return out;
}

double Polynomial::max_coeff_magnitude() const {
    double worst = 0;
    for (const auto& [key, c] : terms_) worst = std::max(worst, gr_magnitude(c));
    return worst;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << to_string(c) << ")";
        for (int s = 0; s < ring_->symbol_count(); ++s) {
            const int e = nibble(key, s);
            if (e == 0) continue;
            os << " " << ring_->symbol_name(s);
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// DiffOp
// ---------------------------------------------------------------------------

bool DiffOp::is_zero() const {
    for (const auto& [s, c] : terms_)
        if (!c.is_zero()) return false;
    return true;
}

void DiffOp::add_term(const Polynomial& coeff, int deriv_symbol) {
    if (!(*ring_ == *coeff.ring()))
        throw ValidationError("DiffOp: coefficient from a different ring");
    if (deriv_symbol < -1 || deriv_symbol >= ring_->symbol_count())
        throw DimensionError("DiffOp: bad derivative symbol");
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(deriv_symbol, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial DiffOp::apply(const Polynomial& f) const {
    if (!(*ring_ == *f.ring())) throw ValidationError("DiffOp::apply: ring mismatch");
    Polynomial out(ring_);
    for (const auto& [s, coeff] : terms_) {
        Polynomial df = (s < 0) ? f : f.derivative(s);
        if (df.is_zero()) continue;
        out += coeff * df;
    }
    return out;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
    for (const auto& [s, c] : o.terms_) add_term(c, s);
    return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
    for (const auto& [s, c] : o.terms_) add_term(c.scaled(GaussianRational(-1)), s);
    return *this;
}

DiffOp DiffOp::scaled(const GaussianRational& c) const {
    DiffOp out(ring_);
    if (c.is_zero()) return out;
    for (const auto& [s, coeff] : terms_) out.terms_.emplace(s, coeff.scaled(c));
    return out;
}

DiffOp DiffOp::conjugated() const {
    DiffOp out(ring_);
    for (const auto& [s, coeff] : terms_)
        out.add_term(coeff.conjugated(), s < 0 ? -1 : ring_->conj_symbol(s));
    return out;
}

std::string DiffOp::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, coeff] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "[" << coeff.str() << "]";
        if (s >= 0) os << " d/d" << ring_->symbol_name(s);
    }
    return os.str();
}

Polynomial op_apply(const DiffOp& op, const Polynomial& f) { return op.apply(f); }

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

Polynomial signed_symbol(const PolyRing& ring, PolyRing::Signed s, int extra_sign = 1) {
    return Polynomial::monomial(ring, Monomial(1) << (4 * s.symbol),
                                GaussianRational(s.sign * extra_sign));
}

} // namespace

DiffOp generator_r(const PolyRing& ring, int a, int b) {
    check_row_col(ring, a, 0);
    check_row_col(ring, b, 0);
    DiffOp op(&ring);
    for (int c = 0; c < ring.cols(); ++c) {
        const auto z = ring.zeta(a, c);
        const auto dd = ring.d(b, c);
        op.add_term(signed_symbol(ring, z, dd.sign), dd.symbol);
    }
    return op;
}

DiffOp generator(const PolyRing& ring, GeneratorKind kind, int i, int j) {
    DiffOp op(&ring);
    switch (kind) {
        case GeneratorKind::h: { // i = alpha, j = beta, both rows
            check_row_col(ring, i, 0);
            check_row_col(ring, j, 0);
            for (int b = 0; b < ring.cols(); ++b) {
                const auto z = ring.zeta(i, b);
                const auto dd = ring.d(j, b);
                op.add_term(signed_symbol(ring, z, dd.sign), dd.symbol);
                const auto zb = ring.zeta_bar(j, b);
                const auto db = ring.d_bar(i, b);
                op.add_term(signed_symbol(ring, zb, -db.sign), db.symbol);
            }
            return op;
        }
        case GeneratorKind::H: { // i = a, j = b, both columns
            check_row_col(ring, 0, i);
            check_row_col(ring, 0, j);
            for (int mu = 0; mu < ring.rows(); ++mu) {
                const auto z = ring.zeta(mu, i);
                const auto dd = ring.d(mu, j);
                op.add_term(signed_symbol(ring, z, dd.sign), dd.symbol);
                const auto zb = ring.zeta_bar(mu, j);
                const auto db = ring.d_bar(mu, i);
                op.add_term(signed_symbol(ring, zb, -db.sign), db.symbol);
            }
            return op;
        }
        case GeneratorKind::p: { // i = alpha (row), j = a (column)
            check_row_col(ring, i, j);
            const auto db = ring.d_bar(i, j);
            op.add_term(Polynomial::constant(ring, GaussianRational(db.sign)), db.symbol);
            for (int b = 0; b < ring.cols(); ++b)
                for (int mu = 0; mu < ring.rows(); ++mu) {
                    const auto z1s = ring.zeta(i, b);
                    const auto z2s = ring.zeta(mu, j);
                    const auto dd = ring.d(mu, b);
                    Polynomial coeff = signed_symbol(ring, z1s) * signed_symbol(ring, z2s, dd.sign);
                    op.add_term(coeff, dd.symbol);
                }
            return op;
        }
        case GeneratorKind::pbar:
            return generator(ring, GeneratorKind::p, i, j).conjugated();
    }
    throw ValidationError("generator: unknown kind");
}

// ---------------------------------------------------------------------------
// Test sets
// ---------------------------------------------------------------------------

std::vector<Polynomial> monomial_basis(const PolyRing& ring, int max_degree) {
    std::vector<Monomial> keys{0};
    std::vector<Monomial> frontier{0};
    for (int d = 1; d <= max_degree; ++d) {
        std::vector<Monomial> next;
        for (Monomial m : frontier) {
            // extend by symbols >= the largest symbol already present to
            // enumerate each multiset once
            int lo = 0;
            for (int s = ring.symbol_count() - 1; s >= 0; --s)
                if (nibble(m, s) > 0) {
                    lo = s;
                    break;
                }
            for (int s = lo; s < ring.symbol_count(); ++s)
                next.push_back(m + (Monomial(1) << (4 * s)));
        }
        keys.insert(keys.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::vector<Polynomial> out;
    out.reserve(keys.size());
    for (Monomial m : keys) out.push_back(Polynomial::monomial(ring, m, GaussianRational(1)));
    return out;
}

std::vector<Polynomial> seeded_polynomials(const PolyRing& ring, int count, int degree,
                                           std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Polynomial> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        Polynomial p(&ring);
        const int terms = 3 + static_cast<int>(rng.integer(0, 2));
        for (int t = 0; t < terms; ++t) {
            Monomial key = 0;
            const int d = (t == 0) ? degree : static_cast<int>(rng.integer(0, degree));
            for (int e = 0; e < d; ++e) {
                int s = static_cast<int>(rng.integer(0, ring.symbol_count() - 1));
                key += Monomial(1) << (4 * s);
            }
            GaussianRational c{Rational(rng.integer(-5, 5), rng.integer(1, 3)),
                               Rational(rng.integer(-5, 5), rng.integer(1, 3))};
            if (c.is_zero()) c = GaussianRational(1);
            p.add_term(key, c);
        }
        if (p.is_zero()) p.add_term(0, GaussianRational(1));
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Commutator machinery
// ---------------------------------------------------------------------------

double commutator_residual(const DiffOp& a, const DiffOp& b, const DiffOp& rhs,
                           const std::vector<Polynomial>& testset) {
    double worst = 0;
    for (const Polynomial& f : testset) {
        Polynomial r = a.apply(b.apply(f));
        r -= b.apply(a.apply(f));
        r -= rhs.apply(f);
        worst = std::max(worst, r.max_coeff_magnitude());
    }
    return worst;
}

namespace {

struct GeneratorCache {
    const PolyRing& ring;
    std::vector<std::vector<DiffOp>> h, H, p, pb;

    explicit GeneratorCache(const PolyRing& r) : ring(r) {
        const int R = r.rows(), C = r.cols();
        h.assign(R, std::vector<DiffOp>(R, DiffOp(&r)));
        H.assign(C, std::vector<DiffOp>(C, DiffOp(&r)));
        p.assign(R, std::vector<DiffOp>(C, DiffOp(&r)));
        pb.assign(R, std::vector<DiffOp>(C, DiffOp(&r)));
        for (int a = 0; a < R; ++a)
            for (int b = 0; b < R; ++b) h[a][b] = generator(r, GeneratorKind::h, a, b);
        for (int a = 0; a < C; ++a)
            for (int b = 0; b < C; ++b) H[a][b] = generator(r, GeneratorKind::H, a, b);
        for (int a = 0; a < R; ++a)
            for (int b = 0; b < C; ++b) {
                p[a][b] = generator(r, GeneratorKind::p, a, b);
                pb[a][b] = generator(r, GeneratorKind::pbar, a, b);
            }
    }

    // (XJ)_{ab} = X_{a, b^1} J(b^1, b);  (JX)_{ab} = J(a, a^1) X_{a^1, b}
    DiffOp hJ(int a, int b) const { return h[a][b ^ 1].scaled(GaussianRational(PolyRing::J(b ^ 1, b))); }
    DiffOp HJ(int a, int b) const { return H[a][b ^ 1].scaled(GaussianRational(PolyRing::J(b ^ 1, b))); }
    DiffOp pJ(int a, int b) const { return p[a][b ^ 1].scaled(GaussianRational(PolyRing::J(b ^ 1, b))); }
    DiffOp pbJ(int a, int b) const { return pb[a][b ^ 1].scaled(GaussianRational(PolyRing::J(b ^ 1, b))); }
    DiffOp Jp(int a, int b) const { return p[a ^ 1][b].scaled(GaussianRational(PolyRing::J(a, a ^ 1))); }
    DiffOp Jpb(int a, int b) const { return pb[a ^ 1][b].scaled(GaussianRational(PolyRing::J(a, a ^ 1))); }
};

void accumulate(DiffOp& acc, int scale, const DiffOp& op) {
    if (scale == 0) return;
    acc += (scale == 1) ? op : op.scaled(GaussianRational(scale));
}

struct TupleCheck {
    DiffOp a, b, rhs;
};

RelationReport run_relation(const std::string& name, const std::vector<TupleCheck>& tuples,
                            const std::vector<Polynomial>& testset, long& applications) {
    RelationReport rep{name, static_cast<long>(tuples.size()), 0.0};
    applications += 3 * static_cast<long>(tuples.size()) * static_cast<long>(testset.size());
    double worst = 0;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : worst) schedule(dynamic)
#endif
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        double r = commutator_residual(tuples[i].a, tuples[i].b, tuples[i].rhs, testset);
        worst = std::max(worst, r);
    }
    rep.max_residual = worst;
    return rep;
}

} // namespace

double TableReport::max_residual() const {
    double worst = 0;
    for (const auto& r : relations) worst = std::max(worst, r.max_residual);
    return worst;
}

TableReport full_table_check(int k, int n, int degree, std::uint64_t seed) {
    if (k > 2 || n > 2) throw ConfigError("full_table_check: k, n <= 2 required");
    if (degree > 3) throw ConfigError("full_table_check: degree <= 3 required");
    PolyRing ring(k, n);
    const int R = ring.rows(), C = ring.cols();

    std::vector<Polynomial> testset = monomial_basis(ring, degree);
    {
        std::vector<Polynomial> seeded = seeded_polynomials(ring, 20, 3, seed);
        testset.insert(testset.end(), seeded.begin(), seeded.end());
    }

    // R^4 + C^4 + 3 R^2 C^2 + 3 R^3 C + 3 C^3 R index tuples across the
    // eleven relation families, plus R^2 for the symmetric-form check
    const long Rl = R, Cl = C;
    const long tuple_count = Rl * Rl * Rl * Rl + Cl * Cl * Cl * Cl + 3 * Rl * Rl * Cl * Cl +
                             3 * Rl * Rl * Rl * Cl + 3 * Cl * Cl * Cl * Rl + Rl * Rl;
    if (tuple_count * static_cast<long>(testset.size()) > 1'000'000)
        throw ConfigError("full_table_check: resource guard, more than 1e6 applications");

    GeneratorCache g(ring);
    TableReport report;

    auto run = [&](const std::string& name, std::vector<TupleCheck>&& tuples) {
        report.relations.push_back(run_relation(name, tuples, testset, report.applications));
    };

    // [(hJ)_{ab},(hJ)_{mn}] = -J_{am}(hJ)_{bn} - J_{an}(hJ)_{bm} - J_{bm}(hJ)_{an} - J_{bn}(hJ)_{am}
    {
        std::vector<TupleCheck> tuples;
        for (int a = 0; a < R; ++a)
            for (int b = 0; b < R; ++b)
                for (int m = 0; m < R; ++m)
                    for (int nn = 0; nn < R; ++nn) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, -PolyRing::J(a, m), g.hJ(b, nn));
                        accumulate(rhs, -PolyRing::J(a, nn), g.hJ(b, m));
                        accumulate(rhs, -PolyRing::J(b, m), g.hJ(a, nn));
                        accumulate(rhs, -PolyRing::J(b, nn), g.hJ(a, m));
                        tuples.push_back({g.hJ(a, b), g.hJ(m, nn), std::move(rhs)});
                    }
        run("[hJ,hJ]", std::move(tuples));
    }
    // [(HJ)_{ab},(HJ)_{cd}] with the same pattern
    {
        std::vector<TupleCheck> tuples;
        for (int a = 0; a < C; ++a)
            for (int b = 0; b < C; ++b)
                for (int c = 0; c < C; ++c)
                    for (int d = 0; d < C; ++d) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, -PolyRing::J(a, c), g.HJ(b, d));
                        accumulate(rhs, -PolyRing::J(a, d), g.HJ(b, c));
                        accumulate(rhs, -PolyRing::J(b, c), g.HJ(a, d));
                        accumulate(rhs, -PolyRing::J(b, d), g.HJ(a, c));
                        tuples.push_back({g.HJ(a, b), g.HJ(c, d), std::move(rhs)});
                    }
        run("[HJ,HJ]", std::move(tuples));
    }
    // [h_{ab}, H_{cd}] = 0
    {
        std::vector<TupleCheck> tuples;
        for (int a = 0; a < R; ++a)
            for (int b = 0; b < R; ++b)
                for (int c = 0; c < C; ++c)
                    for (int d = 0; d < C; ++d)
                        tuples.push_back({g.h[a][b], g.H[c][d], DiffOp(&ring)});
        run("[h,H]", std::move(tuples));
    }
    // (+) [(hJ)_{mn}, p_{aa'}] = J_{am} p_{n a'} + J_{an} p_{m a'}
    {
        std::vector<TupleCheck> tuples;
        for (int m = 0; m < R; ++m)
            for (int nn = 0; nn < R; ++nn)
                for (int a = 0; a < R; ++a)
                    for (int aa = 0; aa < C; ++aa) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, PolyRing::J(a, m), g.p[nn][aa]);
                        accumulate(rhs, PolyRing::J(a, nn), g.p[m][aa]);
                        tuples.push_back({g.hJ(m, nn), g.p[a][aa], std::move(rhs)});
                    }
        run("[hJ,p]", std::move(tuples));
    }
    // (++) [(HJ)_{bc}, p_{aa'}] = J_{a'b} p_{a c} + J_{a'c} p_{a b}
    {
        std::vector<TupleCheck> tuples;
        for (int b = 0; b < C; ++b)
            for (int c = 0; c < C; ++c)
                for (int a = 0; a < R; ++a)
                    for (int aa = 0; aa < C; ++aa) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, PolyRing::J(aa, b), g.p[a][c]);
                        accumulate(rhs, PolyRing::J(aa, c), g.p[a][b]);
                        tuples.push_back({g.HJ(b, c), g.p[a][aa], std::move(rhs)});
                    }
        run("[HJ,p]", std::move(tuples));
    }
    // [p_{aa'}, p_{bb'}] = -J_{a'b'} (hJ)_{ab} - J_{ab} (HJ)_{a'b'}
    {
        std::vector<TupleCheck> tuples;
        for (int a = 0; a < R; ++a)
            for (int aa = 0; aa < C; ++aa)
                for (int b = 0; b < R; ++b)
                    for (int bb = 0; bb < C; ++bb) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, -PolyRing::J(aa, bb), g.hJ(a, b));
                        accumulate(rhs, -PolyRing::J(a, b), g.HJ(aa, bb));
                        tuples.push_back({g.p[a][aa], g.p[b][bb], std::move(rhs)});
                    }
        run("[p,p]", std::move(tuples));
    }
    // [pbar_{aa'}, p_{bb'}] = delta_{ab} H_{b'a'} + delta_{a'b'} h_{ba}
    {
        std::vector<TupleCheck> tuples;
        for (int a = 0; a < R; ++a)
            for (int aa = 0; aa < C; ++aa)
                for (int b = 0; b < R; ++b)
                    for (int bb = 0; bb < C; ++bb) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, a == b ? 1 : 0, g.H[bb][aa]);
                        accumulate(rhs, aa == bb ? 1 : 0, g.h[b][a]);
                        tuples.push_back({g.pb[a][aa], g.p[b][bb], std::move(rhs)});
                    }
        run("[pbar,p]", std::move(tuples));
    }
    // derived: [h_{mn}, p_{aa'}] = delta_{an} p_{m a'} + J_{am} (Jp)_{n a'}
    {
        std::vector<TupleCheck> tuples;
        for (int m = 0; m < R; ++m)
            for (int nn = 0; nn < R; ++nn)
                for (int a = 0; a < R; ++a)
                    for (int aa = 0; aa < C; ++aa) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, a == nn ? 1 : 0, g.p[m][aa]);
                        if (PolyRing::J(a, m) != 0)
                            accumulate(rhs, PolyRing::J(a, m), g.Jp(nn, aa));
                        tuples.push_back({g.h[m][nn], g.p[a][aa], std::move(rhs)});
                    }
        run("[h,p]", std::move(tuples));
    }
    // derived: [H_{bc}, pbar_{aa'}] = -delta_{a'b} pbar_{a c} + J_{a'c} (pbar J)_{a b}
    {
        std::vector<TupleCheck> tuples;
        for (int b = 0; b < C; ++b)
            for (int c = 0; c < C; ++c)
                for (int a = 0; a < R; ++a)
                    for (int aa = 0; aa < C; ++aa) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, aa == b ? -1 : 0, g.pb[a][c]);
                        if (PolyRing::J(aa, c) != 0)
                            accumulate(rhs, PolyRing::J(aa, c), g.pbJ(a, b));
                        tuples.push_back({g.H[b][c], g.pb[a][aa], std::move(rhs)});
                    }
        run("[H,pbar]", std::move(tuples));
    }
    // derived: [h_{mn}, pbar_{aa'}] = -delta_{am} pbar_{n a'} - J_{an} (Jpbar)_{m a'}
    {
        std::vector<TupleCheck> tuples;
        for (int m = 0; m < R; ++m)
            for (int nn = 0; nn < R; ++nn)
                for (int a = 0; a < R; ++a)
                    for (int aa = 0; aa < C; ++aa) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, a == m ? -1 : 0, g.pb[nn][aa]);
                        if (PolyRing::J(a, nn) != 0)
                            accumulate(rhs, -PolyRing::J(a, nn), g.Jpb(m, aa));
                        tuples.push_back({g.h[m][nn], g.pb[a][aa], std::move(rhs)});
                    }
        run("[h,pbar]", std::move(tuples));
    }
    // derived: [H_{bc}, p_{aa'}] = delta_{a'c} p_{a b} - J_{a'b} (pJ)_{a c}
    {
        std::vector<TupleCheck> tuples;
        for (int b = 0; b < C; ++b)
            for (int c = 0; c < C; ++c)
                for (int a = 0; a < R; ++a)
                    for (int aa = 0; aa < C; ++aa) {
                        DiffOp rhs(&ring);
                        accumulate(rhs, aa == c ? 1 : 0, g.p[a][b]);
                        if (PolyRing::J(aa, b) != 0)
                            accumulate(rhs, -PolyRing::J(aa, b), g.pJ(a, c));
                        tuples.push_back({g.H[b][c], g.p[a][aa], std::move(rhs)});
                    }
        run("[H,p]", std::move(tuples));
    }
    // symmetric form: (hJ)_{ab} = (rJ)_{ab} + (rJ)_{ba}
    {
        RelationReport rep{"hJ symmetric", 0, 0.0};
        double worst = 0;
        for (int a = 0; a < R; ++a)
            for (int b = 0; b < R; ++b) {
                const int jb = PolyRing::J(b ^ 1, b);
                const int ja = PolyRing::J(a ^ 1, a);
                DiffOp diff = g.hJ(a, b);
                diff -= generator_r(ring, a, b ^ 1).scaled(GaussianRational(jb));
                diff -= generator_r(ring, b, a ^ 1).scaled(GaussianRational(ja));
                ++rep.tuples;
                for (const Polynomial& f : testset) {
                    worst = std::max(worst, diff.apply(f).max_coeff_magnitude());
                    ++report.applications;
                }
            }
        rep.max_residual = worst;
        report.relations.push_back(rep);
    }

    return report;
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

namespace {

// expected weight of each symbol under the diagonal generators
int expected_h_weight(const PolyRing& ring, int alpha, int s) {
    const int pair = s / 4;
    if (pair / ring.n() != alpha / 2) return 0;
    const int zsign = (s % 4 < 2) ? 1 : -1; // z symbols +, w symbols -
    return (alpha % 2 == 0) ? zsign : -zsign;
}

int expected_H_weight(const PolyRing& ring, int a, int s) {
    const int pair = s / 4;
    if (pair % ring.n() != a / 2) return 0;
    const int zsign = (s % 4 == 0 || s % 4 == 3) ? 1 : -1; // z1, w2 %: +; z2, w1: -
    return (a % 2 == 0) ? zsign : -zsign;
}

// weight vector of a monomial, from a per-symbol weight table
long monomial_weight(const PolyRing& ring, Monomial m, const std::vector<int>& symbol_weight) {
    long w = 0;
    for (int s = 0; s < ring.symbol_count(); ++s) w += nibble(m, s) * symbol_weight[s];
    return w;
}

} // namespace

WeightReport weight_check(int k, int n) {
    if (k > 2 || n > 2) throw ConfigError("weight_check: k, n <= 2 required");
    PolyRing ring(k, n);
    const int R = ring.rows(), C = ring.cols(), S = ring.symbol_count();
    WeightReport rep;
    rep.eigen_ok = rep.table_ok = rep.shift_ok = true;

    std::vector<DiffOp> hdiag, Hdiag;
    for (int a = 0; a < R; ++a) hdiag.push_back(generator(ring, GeneratorKind::h, a, a));
    for (int a = 0; a < C; ++a) Hdiag.push_back(generator(ring, GeneratorKind::H, a, a));

    // per-symbol weights by direct application; must match the signed rule
    std::vector<std::vector<int>> hw(R, std::vector<int>(S, 0)), Hw(C, std::vector<int>(S, 0));
    auto measure = [&](const DiffOp& op, int s, int& out) {
        Polynomial img = op.apply(Polynomial::symbol(ring, s));
        if (img.is_zero()) {
            out = 0;
            return true;
        }
        if (img.term_count() != 1) return false;
        const auto& [key, c] = *img.terms().begin();
        if (key != (Monomial(1) << (4 * s))) return false;
        if (!(c.im == Rational()) || c.re.den() != 1) return false;
        out = static_cast<int>(c.re.num());
        return true;
    };
    for (int a = 0; a < R; ++a)
        for (int s = 0; s < S; ++s) {
            if (!measure(hdiag[a], s, hw[a][s])) rep.eigen_ok = false;
            if (hw[a][s] != expected_h_weight(ring, a, s)) rep.table_ok = false;
        }
    for (int a = 0; a < C; ++a)
        for (int s = 0; s < S; ++s) {
            if (!measure(Hdiag[a], s, Hw[a][s])) rep.eigen_ok = false;
            if (Hw[a][s] != expected_H_weight(ring, a, s)) rep.table_ok = false;
        }

    // every monomial is an eigenvector with the additive weight
    std::vector<Polynomial> basis = monomial_basis(ring, 2);
    for (const Polynomial& f : basis) {
        const Monomial key = f.terms().begin()->first;
        for (int a = 0; a < R; ++a) {
            Polynomial want =
                f.scaled(GaussianRational(monomial_weight(ring, key, hw[a])));
            if (!(hdiag[a].apply(f) == want)) rep.eigen_ok = false;
        }
        for (int a = 0; a < C; ++a) {
            Polynomial want =
                f.scaled(GaussianRational(monomial_weight(ring, key, Hw[a])));
            if (!(Hdiag[a].apply(f) == want)) rep.eigen_ok = false;
        }
        ++rep.monomials_checked;
    }

    // p_{alpha a} shifts the diagonal weights by +1 on its own pair index
    // and -1 on the J-partner, as the (+)/(++) commutators predict
    for (int alpha = 0; alpha < R && rep.shift_ok; ++alpha)
        for (int a = 0; a < C && rep.shift_ok; ++a) {
            DiffOp pg = generator(ring, GeneratorKind::p, alpha, a);
            for (const Polynomial& f : basis) {
                Polynomial img = pg.apply(f);
                if (img.is_zero()) continue;
                const Monomial fkey = f.terms().begin()->first;
                for (const auto& [key, c] : img.terms()) {
                    for (int nu = 0; nu < R; ++nu) {
                        long shift = (nu == alpha ? 1 : 0) - (nu == (alpha ^ 1) ? 1 : 0);
                        if (monomial_weight(ring, key, hw[nu]) !=
                            monomial_weight(ring, fkey, hw[nu]) + shift)
                            rep.shift_ok = false;
                    }
                    for (int b = 0; b < C; ++b) {
                        long shift = (b == a ? 1 : 0) - (b == (a ^ 1) ? 1 : 0);
                        if (monomial_weight(ring, key, Hw[b]) !=
                            monomial_weight(ring, fkey, Hw[b]) + shift)
                            rep.shift_ok = false;
                    }
                }
            }
        }

    if (!rep.all_ok()) rep.detail = "weight structure violated";
    return rep;
}

// ---------------------------------------------------------------------------
// Rank of the generated algebra
// ---------------------------------------------------------------------------

namespace {

using SparseRow = std::map<long, Rational>;

// image coordinates of op acting on {1} + all symbols, flattened over
// (input, monomial, re/im)
SparseRow action_row(const PolyRing& ring, const DiffOp& op,
                     std::map<std::pair<int, Monomial>, long>& column_index) {
    SparseRow row;
    auto add_poly = [&](int input, const Polynomial& img) {
        for (const auto& [key, c] : img.terms()) {
            auto [it, inserted] = column_index.try_emplace({input, key},
                                                           static_cast<long>(column_index.size()));
            const long base = 2 * it->second;
            if (c.re != 0) row[base] += c.re;
            if (c.im != 0) row[base + 1] += c.im;
        }
    };
    add_poly(-1, op.apply(Polynomial::constant(ring, GaussianRational(1))));
    for (int s = 0; s < ring.symbol_count(); ++s)
        add_poly(s, op.apply(Polynomial::symbol(ring, s)));
    for (auto it = row.begin(); it != row.end();)
        it = (it->second == 0) ? row.erase(it) : std::next(it);
    return row;
}

} // namespace

long generated_algebra_rank(int k, int n) {
    PolyRing ring(k, n);
    const int R = ring.rows(), C = ring.cols();
    std::vector<DiffOp> gens;
    for (int a = 0; a < R; ++a)
        for (int b = 0; b < R; ++b) gens.push_back(generator(ring, GeneratorKind::h, a, b));
    for (int a = 0; a < C; ++a)
        for (int b = 0; b < C; ++b) gens.push_back(generator(ring, GeneratorKind::H, a, b));
    for (int a = 0; a < R; ++a)
        for (int b = 0; b < C; ++b) {
            gens.push_back(generator(ring, GeneratorKind::p, a, b));
            gens.push_back(generator(ring, GeneratorKind::pbar, a, b));
        }

    std::map<std::pair<int, Monomial>, long> column_index;
    std::map<long, SparseRow> pivots; // pivot column -> normalized row
    long rank = 0;
    for (const DiffOp& op : gens) {
        SparseRow row = action_row(ring, op, column_index);
        while (!row.empty()) {
            const long col = row.begin()->first;
            auto piv = pivots.find(col);
            if (piv == pivots.end()) {
                const Rational lead = row.begin()->second;
                for (auto& [c, v] : row) v /= lead;
                pivots.emplace(col, std::move(row));
                ++rank;
                break;
            }
            const Rational factor = row.begin()->second;
            for (const auto& [c, v] : piv->second) {
                Rational& slot = row[c];
                slot -= factor * v;
                if (slot == 0) row.erase(c);
            }
        }
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Structural identities
// ---------------------------------------------------------------------------

double index_maps_residual(const PolyRing& ring) {
    double worst = 0;
    for (int beta = 0; beta < ring.rows(); ++beta)
        for (int b = 0; b < ring.cols(); ++b) {
            DiffOp dop(&ring);
            const auto dd = ring.d(beta, b);
            dop.add_term(Polynomial::constant(ring, GaussianRational(dd.sign)), dd.symbol);
            for (int alpha = 0; alpha < ring.rows(); ++alpha)
                for (int a = 0; a < ring.cols(); ++a) {
                    const auto z = ring.zeta(alpha, a);
                    Polynomial r1 = dop.apply(signed_symbol(ring, z));
                    const int want1 = (alpha == beta && a == b) ? 1 : 0;
                    r1 -= Polynomial::constant(ring, GaussianRational(want1));
                    worst = std::max(worst, r1.max_coeff_magnitude());

                    const auto zb = ring.zeta_bar(alpha, a);
                    Polynomial r2 = dop.apply(signed_symbol(ring, zb));
                    const int want2 = PolyRing::J(beta, alpha) * PolyRing::J(b, a);
                    r2 -= Polynomial::constant(ring, GaussianRational(want2));
                    worst = std::max(worst, r2.max_coeff_magnitude());
                }
        }
    return worst;
}

double skewness_residual(const PolyRing& ring, const std::vector<Polynomial>& testset) {
    double worst = 0;
    auto run = [&](GeneratorKind kind, int range) {
        for (int a = 0; a < range; ++a)
            for (int b = 0; b < range; ++b) {
                DiffOp defect = generator(ring, kind, b, a).conjugated();
                defect += generator(ring, kind, a, b);
                for (const Polynomial& f : testset)
                    worst = std::max(worst, defect.apply(f).max_coeff_magnitude());
            }
    };
    run(GeneratorKind::h, ring.rows());
    run(GeneratorKind::H, ring.cols());
    return worst;
}

} // namespace flagcurv
