#include "flagcurv/harness.hpp"

#include "flagcurv/forms.hpp"
#include "flagcurv/liealg.hpp"
#include "flagcurv/lorentz.hpp"
#include "flagcurv/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace flagcurv {

void SuiteConfig::validate() const {
    if (N_max < 2 || N_max > 8) throw ConfigError("config: N_max must lie in [2, 8]");
    if (k_max < 1 || n_max < 1 || k_max > n_max)
        throw ConfigError("config: 1 <= k_max <= n_max required");
    if (!(fd_step >= 1e-6 && fd_step <= 1e-2))
        throw ConfigError("config: fd_step must lie in [1e-6, 1e-2]");
    if (trials < 1) throw ConfigError("config: trials >= 1 required");
}

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
    SuiteConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("k_max")) cfg.k_max = j.at("k_max").get<int>();
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
    if (j.contains("N_max")) cfg.N_max = j.at("N_max").get<int>();
    if (j.contains("fd_step")) cfg.fd_step = j.at("fd_step").get<double>();
    if (j.contains("parallel")) cfg.parallel = j.at("parallel").get<bool>();
    if (j.contains("tolerances"))
        for (const auto& [key, value] : j.at("tolerances").items())
            cfg.tolerances[key] = value.get<double>();
    return cfg;
}

nlohmann::json SuiteConfig::to_json() const {
    nlohmann::json j{{"seed", seed},     {"trials", trials},   {"k_max", k_max},
                     {"n_max", n_max},   {"N_max", N_max},     {"fd_step", fd_step},
                     {"parallel", parallel}};
    j["tolerances"] = nlohmann::json::object();
    for (const auto& [key, value] : tolerances) j["tolerances"][key] = value;
    return j;
}

std::uint64_t salted(std::uint64_t trial_seed, std::uint64_t salt) {
    std::uint64_t x = trial_seed ^ (salt * 0xBF58476D1CE4E5B9ULL);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

double max_over_trials(const SuiteConfig& cfg,
                       const std::function<double(std::uint64_t)>& trial) {
    const int trials = cfg.trials;
    double worst = 0.0;
    bool failed = false;
    std::string message;
    if (cfg.parallel) {
#ifdef _OPENMP
#pragma omp parallel for reduction(max : worst) schedule(dynamic)
#endif
        for (int i = 0; i < trials; ++i) {
            try {
                worst = std::max(worst, trial(cfg.seed + static_cast<std::uint64_t>(i)));
            } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
                {
                    failed = true;
                    if (message.empty()) message = e.what();
                }
            }
        }
    } else {
        for (int i = 0; i < trials; ++i)
            worst = std::max(worst, trial(cfg.seed + static_cast<std::uint64_t>(i)));
    }
    if (failed) throw ValidationError("trial threw: " + message);
    return worst;
}

namespace {

double tol_const(double v, const SuiteConfig&) { return v; }

auto tol(double v) {
    return [v](const SuiteConfig& cfg) { return tol_const(v, cfg); };
}

double rel_fro(const QMatrix& got, const QMatrix& want) {
    const double scale = std::max(1e-30, fro_norm(want));
    return fro_norm(got - want) / scale;
}

QuaternionQ rational_quat(Rng& rng) {
    auto r = [&] { return Rational(rng.integer(-9, 9), rng.integer(1, 9)); };
    return {r(), r(), r(), r()};
}

double exact_quat_residual(const QuaternionQ& a, const QuaternionQ& b) {
    QuaternionQ d = a - b;
    auto mag = [](const Rational& r) { return std::abs(r.to_double()); };
    return mag(d.x0) + mag(d.x1) + mag(d.x2) + mag(d.x3);
}

// Sp(2) element left-rotated so the scalar blocks A and D are real and
// positive (the Sp(1) x Sp(1) gauge fixing of the two-point case).
BlockedGroupElement gauge_fixed_sp2(std::uint64_t seed) {
    for (std::uint64_t bump = 0;; ++bump) {
        SpElement g = random_sp(2, salted(seed, 11 + bump));
        const Quaternion a = g.mat()(0, 0), d = g.mat()(1, 1);
        if (qnorm(a) < 0.2 || qnorm(d) < 0.2) continue;
        QMatrix rot = QMatrix::zeros(2, 2);
        rot(0, 0) = (1.0 / qnorm(a)) * conj(a);
        rot(1, 1) = (1.0 / qnorm(d)) * conj(d);
        return BlockedGroupElement::split(SpElement{rot * g.mat()}, 1);
    }
}

SpAlgebraElement block_diag_skew(const Partition& p, std::uint64_t seed) {
    QMatrix m = QMatrix::zeros(p.total(), p.total());
    for (int mu = 0; mu < p.count(); ++mu)
        m.set_block(p.offset(mu), p.offset(mu), random_skew(p.part(mu), salted(seed, mu)).mat());
    return SpAlgebraElement(m);
}

CurvePatch seeded_patch(int n, std::uint64_t seed) {
    return CurvePatch(random_sp(n, salted(seed, 1)), random_skew(n, salted(seed, 2)),
                      random_skew(n, salted(seed, 3)));
}

std::vector<Partition> mc2_partitions(int N) {
    switch (N) {
        case 2: return {Partition{1, 1}, Partition{2}};
        case 3: return {Partition{1, 1, 1}, Partition{1, 2}, Partition{2, 1}};
        default: return {Partition{1, 3}, Partition{2, 2}, Partition{1, 1, 2}};
    }
}

// -------------------------------------------------------------------------
// quat checks
// -------------------------------------------------------------------------

double check_norm_mult_exact(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        QuaternionQ a = rational_quat(rng), b = rational_quat(rng);
        Rational d = norm2(a * b) - norm2(a) * norm2(b);
        return std::abs(d.to_double());
    });
}

double check_norm_mult_double(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        Quaternion a = rng.quaternion(), b = rng.quaternion();
        const double lhs = norm2(a * b), rhs = norm2(a) * norm2(b);
        return std::abs(lhs - rhs) / std::max(1e-30, rhs);
    });
}

double check_conj_anti_exact(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        QuaternionQ a = rational_quat(rng), b = rational_quat(rng);
        return exact_quat_residual(conj(a * b), conj(b) * conj(a));
    });
}

double check_conj_anti_double(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        Quaternion a = rng.quaternion(), b = rng.quaternion();
        Quaternion d = conj(a * b) - conj(b) * conj(a);
        return qnorm(d) / std::max(1e-30, qnorm(a * b));
    });
}

double check_m2c_homomorphism(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        Quaternion a = rng.quaternion(), b = rng.quaternion();
        Quaternion via = from_m2c(m2c_mul(to_m2c(a), to_m2c(b)));
        return qnorm(via - a * b) / std::max(1e-30, qnorm(a * b));
    });
}

double check_m2c_roundtrip(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        Quaternion q = rng.quaternion();
        return from_m2c(to_m2c(q)) == q ? 0.0 : 1.0;
    });
}

double check_m2c_determinant(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        Quaternion q = rng.quaternion();
        M2CRep m = to_m2c(q);
        const double det = std::norm(m.z1) + std::norm(m.z2);
        return std::abs(det - norm2(q)) / std::max(1e-30, norm2(q));
    });
}

double check_ring_axioms(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        QuaternionQ a = rational_quat(rng), b = rational_quat(rng), c = rational_quat(rng);
        double r = exact_quat_residual((a * b) * c, a * (b * c));
        r = std::max(r, exact_quat_residual(a * (b + c), a * b + a * c));
        r = std::max(r, exact_quat_residual((a + b) * c, a * c + b * c));
        return r;
    });
}

double check_conj_is_jtranspose(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        Quaternion q = rng.quaternion();
        // q' in M2C is the matrix with z1' = z1, z2' = -conj(z2); then
        // entrywise complex conjugation (the j sandwich) gives
        // (conj(z1), -z2), which must equal to_m2c(conj(q))
        M2CRep m = to_m2c(q);
        M2CRep want = to_m2c(conj(q));
        M2CRep got{std::conj(m.z1), -m.z2};
        return (got == want) ? 0.0 : 1.0;
    });
}

double check_j_involution(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        Quaternion q = rng.quaternion();
        double r = (j_conjugate(j_conjugate(q)) == q) ? 0.0 : 1.0;
        // fixes 1 and i, negates j and k
        if (j_conjugate(Quaternion{0, 1, 0, 0}) != Quaternion{0, 1, 0, 0}) r = 1.0;
        if (j_conjugate(Quaternion{0, 0, 1, 0}) != Quaternion{0, 0, -1, 0}) r = 1.0;
        return r;
    });
}

// -------------------------------------------------------------------------
// qmat checks
// -------------------------------------------------------------------------

double check_embed_homomorphism(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        const int n = 1 + static_cast<int>(ts % 4);
        QMatrix a = random_tangent(n, n, salted(ts, 1));
        QMatrix b = random_tangent(n, n, salted(ts, 2));
        double r = (embed(a * b) - embed(a) * embed(b)).norm() /
                   std::max(1e-30, embed(a * b).norm());
        r = std::max(r, (embed(adjoint(a)) - embed(a).adjoint()).norm());
        r = std::max(r, (embed(a + b) - (embed(a) + embed(b))).norm());
        r = std::max(r, fro_norm(unembed(embed(a)) - a));
        return r;
    });
}

double check_embed_inverse(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        const int n = 2 + static_cast<int>(ts % 3);
        QMatrix m = random_tangent(n, n, salted(ts, 3));
        QMatrix inv = q_inverse(m);
        return fro_norm(m * inv - QMatrix::identity(n));
    });
}

double check_sp_closure(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [&cfg](std::uint64_t ts) {
        const int n = 2 + static_cast<int>(ts % std::max(1, cfg.N_max - 1));
        SpElement g1 = random_sp(n, salted(ts, 4)), g2 = random_sp(n, salted(ts, 5));
        QMatrix prod = g1.mat() * g2.mat();
        return fro_norm(prod * adjoint(prod) - QMatrix::identity(n));
    });
}

double check_skew_commutator(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        const int n = 2 + static_cast<int>(ts % 3);
        SpAlgebraElement a = random_skew(n, salted(ts, 6)), b = random_skew(n, salted(ts, 7));
        SpAlgebraElement c = algebra_commutator(a, b);
        return fro_norm(adjoint(c.mat()) + c.mat());
    });
}

double check_expm_unitarity(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        const int n = 1 + static_cast<int>(ts % 4);
        SpElement g = q_expm(random_skew(n, salted(ts, 8)));
        return fro_norm(g.mat() * adjoint(g.mat()) - QMatrix::identity(n));
    });
}

double check_expm_one_parameter(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        const int n = 2 + static_cast<int>(ts % 3);
        SpAlgebraElement a = random_skew(n, salted(ts, 9));
        auto at = [&](double s) { return q_expm(SpAlgebraElement(s * a.mat())).mat(); };
        return fro_norm(at(0.8) - at(0.3) * at(0.5));
    });
}

double check_expm_block_diag(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Partition p{2, 2};
        SpElement e = q_expm(block_diag_skew(p, salted(ts, 10)));
        return std::max(fro_norm(p.block_of(e.mat(), 0, 1)), fro_norm(p.block_of(e.mat(), 1, 0)));
    });
}

double check_random_determinism(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        bool same = random_sp(3, ts).mat() == random_sp(3, ts).mat() &&
                    random_skew(2, ts).mat() == random_skew(2, ts).mat() &&
                    random_tangent(2, 3, ts) == random_tangent(2, 3, ts);
        return same ? 0.0 : 1.0;
    });
}

// -------------------------------------------------------------------------
// grassmann checks
// -------------------------------------------------------------------------

const std::vector<std::pair<int, int>>& chart_pairs() {
    static const std::vector<std::pair<int, int>> kPairs{{1, 1}, {1, 2}, {2, 2}, {2, 3}};
    return kPairs;
}

double check_chart_identity(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [&cfg](std::uint64_t ts) {
        double worst = 0;
        for (auto [k, n] : chart_pairs()) {
            if (k + n > cfg.N_max) continue;
            SpElement g = random_sp(k + n, salted(ts, 100 + k * 10 + n));
            StiefelBlock x = stiefel_from_group(g, k);
            GrassmannPoint y = grassmann_from_stiefel(x);
            QMatrix lhs = QMatrix::identity(k) + y.Y() * adjoint(y.Y());
            QMatrix rhs = q_inverse(adjoint(x.Xk) * x.Xk);
            worst = std::max(worst, fro_norm(lhs - rhs));
        }
        return worst;
    });
}

double check_lft_closed_forms(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [&cfg](std::uint64_t ts) {
        const int k = 1 + static_cast<int>(ts % cfg.k_max);
        const int n = std::min(cfg.n_max, cfg.N_max - k);
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(k + n, salted(ts, 20)), k);
        GrassmannPoint y(0.5 * random_tangent(k, n, salted(ts, 21)));
        auto [canonical, starred] = lft_apply_both(g, y);
        return rel_fro(canonical, starred);
    });
}

double check_lft_group_axioms(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        const int k = 2, n = 2;
        SpElement g1 = random_sp(k + n, salted(ts, 22)), g2 = random_sp(k + n, salted(ts, 23));
        BlockedGroupElement b1 = BlockedGroupElement::split(g1, k);
        BlockedGroupElement b2 = BlockedGroupElement::split(g2, k);
        BlockedGroupElement b21 = BlockedGroupElement::split(SpElement{g2.mat() * g1.mat()}, k);
        GrassmannPoint y(0.4 * random_tangent(k, n, salted(ts, 24)));
        double r = rel_fro(lft_apply(b2, lft_apply(b1, y)).Y(), lft_apply(b21, y).Y());
        BlockedGroupElement e = BlockedGroupElement::split(SpElement{QMatrix::identity(k + n)}, k);
        r = std::max(r, fro_norm(lft_apply(e, y).Y() - y.Y()));
        return r;
    });
}

double check_lft_origin_image(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(4, salted(ts, 25)), 2);
        QMatrix img = lft_apply(g, GrassmannPoint::zero(2, 2)).Y();
        double r = rel_fro(img, g.B() * q_inverse(g.D()));
        r = std::max(r, rel_fro(img, -(q_inverse(adjoint(g.A())) * adjoint(g.C()))));
        return r;
    });
}

double check_gram_eigenfloor(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [&cfg](std::uint64_t ts) {
        const int k = 1 + static_cast<int>(ts % cfg.k_max);
        const int n = std::min(cfg.n_max, cfg.N_max - k);
        SpElement g = random_sp(k + n, salted(ts, 26));
        GrassmannPoint y = grassmann_from_stiefel(stiefel_from_group(g, k));
        QMatrix gram = QMatrix::identity(k) + y.Y() * adjoint(y.Y());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(embed(gram), Eigen::EigenvaluesOnly);
        return std::max(0.0, 1.0 - es.eigenvalues().minCoeff());
    });
}

double check_metric_invariance(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [&cfg](std::uint64_t ts) {
        const int k = 1 + static_cast<int>(ts % cfg.k_max);
        const int n = std::min(cfg.n_max, cfg.N_max - k);
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(k + n, salted(ts, 27)), k);
        GrassmannPoint y(0.4 * random_tangent(k, n, salted(ts, 28)));
        QMatrix u = random_tangent(k, n, salted(ts, 29));
        const double before = metric_eval(y, u, u);
        const double after = metric_eval(lft_apply(g, y), lft_pushforward(g, y, u), lft_pushforward(g, y, u));
        return std::abs(after - before) / before;
    });
}

double check_metric_w12(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(3, salted(ts, 30)), 1);
        GrassmannPoint y = g.base_point();
        QMatrix u = random_tangent(1, 2, salted(ts, 31));
        QMatrix w12 = -(adjoint(g.A()) * u * g.D());
        const double via_form = re_trace(w12 * adjoint(w12));
        const double via_metric = metric_eval(y, u, u);
        return std::abs(via_form - via_metric) / via_metric;
    });
}

double check_pushforward_linearity(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(4, salted(ts, 32)), 2);
        GrassmannPoint y(0.3 * random_tangent(2, 2, salted(ts, 33)));
        QMatrix u = random_tangent(2, 2, salted(ts, 34)), v = random_tangent(2, 2, salted(ts, 35));
        QMatrix lhs = lft_pushforward(g, y, u + 2.5 * v);
        QMatrix rhs = lft_pushforward(g, y, u) + 2.5 * lft_pushforward(g, y, v);
        return rel_fro(lhs, rhs);
    });
}

double check_dimensions(const SuiteConfig&) {
    double r = 0;
    for (int k = 1; k <= 4; ++k)
        for (int n = k; n <= 4; ++n) {
            GrassmannDims d = dimensions(k, n);
            r = std::max(r, std::abs(double(d.dim_Y - 4L * k * n)));
            r = std::max(r, std::abs(double(d.dim_X - (4L * k * n + 2L * k * k + k))));
            r = std::max(r, std::abs(double(d.dim_fiber - sp_dimension(k))));
            r = std::max(r, std::abs(double(d.dim_X - d.dim_fiber - d.dim_Y)));
        }
    r = std::max(r, std::abs(double(sp_dimension(1) - 3)));
    r = std::max(r, std::abs(double(sp_dimension(2) - 10)));
    return r;
}

// -------------------------------------------------------------------------
// forms checks
// -------------------------------------------------------------------------

double check_mc2_convergence(const SuiteConfig& cfg) {
    double worst = 0;
    for (int N = 2; N <= std::min(4, cfg.N_max); ++N)
        for (const Partition& p : mc2_partitions(N)) {
            CurvePatch patch = seeded_patch(N, salted(cfg.seed, 40 + N));
            const double r1 = mc2_residual(patch, p, cfg.fd_step);
            const double r2 = mc2_residual(patch, p, cfg.fd_step / 2);
            worst = std::max(worst, std::abs(r1 / r2 - 4.0));
        }
    return worst;
}

double check_curvature_block_equality(const SuiteConfig& cfg) {
    double worst = 0;
    const std::vector<Partition> parts{Partition{1, 1}, Partition{1, 3}, Partition{2, 2},
                                       Partition{1, 1, 2}};
    for (const Partition& p : parts) {
        if (p.total() > cfg.N_max) continue;
        CurvePatch patch = seeded_patch(p.total(), salted(cfg.seed, 50 + p.count()));
        for (int mu = 0; mu < p.count(); ++mu) {
            CurvatureBlockDetail d = curvature_block_detail(patch, p, mu, cfg.fd_step);
            worst = std::max(worst, d.agreement / std::max(10.0 * d.mc2_reference, 1e-8));
        }
    }
    return worst;
}

double check_mc2_vs_blocks(const SuiteConfig& cfg) {
    double worst = 0;
    for (const Partition& p : mc2_partitions(std::min(4, cfg.N_max))) {
        CurvePatch patch = seeded_patch(p.total(), salted(cfg.seed, 60));
        worst = std::max(worst, mc2_residual(patch, p, cfg.fd_step));
    }
    return worst;
}

double check_offdiag_mc(const SuiteConfig& cfg) {
    double worst = 0;
    for (int k = 1; k <= 2; ++k) {
        CurvePatch patch = seeded_patch(k + 2, salted(cfg.seed, 70 + k));
        const double r1 = offdiag_mc_residual(patch, k, cfg.fd_step);
        const double r2 = offdiag_mc_residual(patch, k, cfg.fd_step / 2);
        worst = std::max(worst, std::abs(r1 / r2 - 4.0));
    }
    return worst;
}

double check_w12(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [&cfg](std::uint64_t ts) {
        const int k = 1 + static_cast<int>(ts % cfg.k_max);
        const int N = std::min(cfg.N_max, k + 2);
        return w12_residual(random_sp(N, salted(ts, 80)), random_skew(N, salted(ts, 81)), k);
    });
}

double check_torsion(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        double worst = 0;
        for (int k : {1, 2}) {
            BlockedGroupElement g =
                BlockedGroupElement::split(random_sp(2 * k, salted(ts, 90 + k)), k);
            GrassmannPoint y = g.base_point();
            worst = std::max(worst, torsion_identity_residual(
                                        g, y, random_tangent(k, k, salted(ts, 92)),
                                        random_tangent(k, k, salted(ts, 93)),
                                        random_tangent(k, k, salted(ts, 94))));
        }
        return worst;
    });
}

double check_gauge_tensoriality(const SuiteConfig& cfg) {
    SuiteConfig sub = cfg;
    sub.trials = std::min(cfg.trials, 20);
    return max_over_trials(sub, [&cfg](std::uint64_t ts) {
        Partition p{1, 2};
        CurvePatch patch = seeded_patch(3, salted(ts, 95));
        SpElement h = q_expm(block_diag_skew(p, salted(ts, 96)));
        CurvePatch gauged = patch.right_translated(h);
        double worst = rel_fro(gauged.omega_s(0, 0), gauge_transform(patch.omega_s(0, 0), h, p));
        for (int mu = 0; mu < p.count(); ++mu) {
            QMatrix hb = h.mat().block(p.offset(mu), p.offset(mu), p.part(mu), p.part(mu));
            QMatrix want = adjoint(hb) * curvature_block(patch, p, mu, cfg.fd_step).value * hb;
            QMatrix got = curvature_block(gauged, p, mu, cfg.fd_step).value;
            worst = std::max(worst, fro_norm(got - want));
        }
        return worst;
    });
}

double check_twoform_structure(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(3, salted(ts, 97)), 1);
        GrassmannPoint y = g.base_point();
        QMatrix u = random_tangent(1, 2, salted(ts, 98)), v = random_tangent(1, 2, salted(ts, 99));
        auto [o1, o2] = curvature_closed_form(g, y, u, v);
        auto [s1, s2] = curvature_closed_form(g, y, v, u);
        double worst = fro_norm(adjoint(o1.value) + o1.value);
        worst = std::max(worst, fro_norm(adjoint(o2.value) + o2.value));
        worst = std::max(worst, fro_norm(s1.value + o1.value));
        worst = std::max(worst, fro_norm(s2.value + o2.value));
        return worst;
    });
}

double check_ricci(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        GrassmannPoint y(0.5 * random_tangent(2, 2, salted(ts, 100)));
        QMatrix u = random_tangent(2, 2, salted(ts, 101)), v = random_tangent(2, 2, salted(ts, 102));
        auto [r1, r2] = ricci_forms(y, u, v);
        auto [s1, s2] = ricci_forms(y, v, u);
        double worst = std::abs(r1.x0);
        worst = std::max(worst, std::abs(r2.x0));
        worst = std::max(worst, qnorm(s1 + r1));
        worst = std::max(worst, qnorm(s2 + r2));
        return worst;
    });
}

double check_ym_specialization(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        BlockedGroupElement g = gauge_fixed_sp2(ts);
        Quaternion q = g.base_point().Y()(0, 0);
        QMatrix u = random_tangent(1, 1, salted(ts, 110)), v = random_tangent(1, 1, salted(ts, 111));
        auto [c1, c2] = curvature_closed_form(g, g.base_point(), u, v);
        auto [y1, y2] = ym_curvature(q, u(0, 0), v(0, 0));
        const double scale = std::max({1e-30, qnorm(y1), qnorm(y2)});
        return std::max(qnorm(c1.value(0, 0) - y1), qnorm(c2.value(0, 0) - y2)) / scale;
    });
}

double check_hodge(const SuiteConfig&) {
    R4TwoForm f_plus = [](const Quaternion& u, const Quaternion& v) {
        return u * conj(v) - v * conj(u);
    };
    R4TwoForm f_minus = [](const Quaternion& u, const Quaternion& v) {
        return conj(u) * v - conj(v) * u;
    };
    return (hodge_duality_sign(f_plus) == 1 && hodge_duality_sign(f_minus) == -1) ? 0.0 : 1.0;
}

double check_chern(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        BlockedGroupElement g = BlockedGroupElement::split(random_sp(2, salted(ts, 120)), 1);
        GrassmannPoint y = g.base_point();
        TwoFormEvaluator omega = [&](const QMatrix& a, const QMatrix& b) {
            return curvature_closed_form(g, y, a, b).first.value;
        };
        QMatrix t0 = random_tangent(1, 1, salted(ts, 121)), t1 = random_tangent(1, 1, salted(ts, 122)),
                t2 = random_tangent(1, 1, salted(ts, 123)), t3 = random_tangent(1, 1, salted(ts, 124));
        double worst = std::abs(chern_trace(omega, {t0, t0}, 1));
        worst = std::max(worst, std::abs(chern_trace(omega, {t0, t0, t1, t2}, 2)));
        const double plus = chern_trace(omega, {t0, t1, t2, t3}, 2);
        const double minus = chern_trace(omega, {t1, t0, t2, t3}, 2);
        worst = std::max(worst, std::abs(plus + minus) / std::max(1.0, std::abs(plus)));
        return worst;
    });
}

// -------------------------------------------------------------------------
// liealg checks
// -------------------------------------------------------------------------

std::vector<std::pair<int, int>> liealg_sizes(const SuiteConfig& cfg) {
    std::vector<std::pair<int, int>> sizes{{1, 1}};
    if (cfg.n_max >= 2) sizes.emplace_back(1, 2);
    if (cfg.k_max >= 2 && cfg.n_max >= 2) sizes.emplace_back(2, 2);
    return sizes;
}

double check_commutator_table(const SuiteConfig& cfg) {
    double worst = 0;
    for (auto [k, n] : liealg_sizes(cfg))
        worst = std::max(worst, full_table_check(k, n, 2, cfg.seed).max_residual());
    return worst;
}

double check_index_maps(const SuiteConfig& cfg) {
    double worst = 0;
    for (auto [k, n] : liealg_sizes(cfg)) {
        PolyRing ring(k, n);
        worst = std::max(worst, index_maps_residual(ring));
    }
    return worst;
}

double check_generator_skewness(const SuiteConfig& cfg) {
    double worst = 0;
    for (auto [k, n] : liealg_sizes(cfg)) {
        PolyRing ring(k, n);
        worst = std::max(worst, skewness_residual(ring, monomial_basis(ring, 2)));
    }
    return worst;
}

double check_weight_structure(const SuiteConfig& cfg) {
    for (auto [k, n] : liealg_sizes(cfg))
        if (!weight_check(k, n).all_ok()) return 1.0;
    return 0.0;
}

double check_generated_rank(const SuiteConfig& cfg) {
    double worst = 0;
    for (auto [k, n] : liealg_sizes(cfg)) {
        const long want = static_cast<long>(k + n) * (2 * (k + n) + 1);
        worst = std::max(worst, std::abs(double(generated_algebra_rank(k, n) - want)));
    }
    return worst;
}

double check_negative_control(const SuiteConfig& cfg) {
    PolyRing ring(1, 1);
    std::vector<Polynomial> testset = monomial_basis(ring, 2);
    DiffOp broken(&ring);
    const auto db = ring.d_bar(0, 0);
    broken.add_term(Polynomial::constant(ring, GaussianRational(db.sign)), db.symbol);
    DiffOp rhs = generator(ring, GeneratorKind::H, 0, 0);
    rhs += generator(ring, GeneratorKind::h, 0, 0);
    const double res = commutator_residual(generator(ring, GeneratorKind::pbar, 0, 0), broken,
                                           rhs, testset);
    (void)cfg;
    return res > 0.0 ? 0.0 : 1.0;
}

// -------------------------------------------------------------------------
// lorentz checks
// -------------------------------------------------------------------------

SL2C random_sl2c(Rng& rng) {
    std::complex<double> a{rng.symmetric(), rng.symmetric()}, b{rng.symmetric(), rng.symmetric()},
        c{rng.symmetric(), rng.symmetric()}, d{rng.symmetric(), rng.symmetric()};
    std::complex<double> det = a * d - b * c;
    while (std::abs(det) < 0.05) {
        a += 1.0;
        det = a * d - b * c;
    }
    const std::complex<double> scale = 1.0 / std::sqrt(det);
    return SL2C(a * scale, b * scale, c * scale, d * scale);
}

double check_det_invariance(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        SL2C l = random_sl2c(rng);
        Event e{rng.symmetric(), rng.symmetric(), rng.symmetric(), rng.symmetric()};
        const double before = std::norm(std::complex<double>(e.x0, e.x3)) +
                              std::norm(std::complex<double>(e.x1, e.x2));
        const double after = c2_det(act_on_event(l, e)).real();
        double worst = std::abs(after - before) / std::max(1.0, before);
        // null events stay null in the Hermitian picture
        e.x0 = std::sqrt(e.x1 * e.x1 + e.x2 * e.x2 + e.x3 * e.x3);
        Event img = act_on_event_hermitian(l, e);
        const double interval =
            img.x0 * img.x0 - img.x1 * img.x1 - img.x2 * img.x2 - img.x3 * img.x3;
        worst = std::max(worst, std::abs(interval) / std::max(1.0, img.x0 * img.x0));
        return worst;
    });
}

double check_so13(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        SL2C l = random_sl2c(rng);
        auto m = sl2c_to_lorentz(l);
        static constexpr double kEta[4] = {1, -1, -1, -1};
        double worst = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                double s = 0;
                for (int c = 0; c < 4; ++c) s += m[c][a] * kEta[c] * m[c][b];
                worst = std::max(worst, std::abs(s - (a == b ? kEta[a] : 0.0)));
            }
        if (m[0][0] < 1.0 - 1e-12) worst = std::max(worst, 1.0);
        auto mn = sl2c_to_lorentz(l.negated());
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                if (m[a][b] != mn[a][b]) worst = std::max(worst, 1.0);
        Eigen::Matrix4d e;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) e(a, b) = m[a][b];
        worst = std::max(worst, std::abs(e.determinant() - 1.0));
        return worst;
    });
}

double check_boost_fixed_points(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        const double lam = 0.5 + 2.0 * rng.uniform();
        return (boost_velocity(lam, 1.0) == 1.0 && boost_velocity(lam, -1.0) == -1.0) ? 0.0 : 1.0;
    });
}

double check_boost_gamma(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        const double w = 0.05 + rng.uniform();
        const double lam = std::exp(w);
        const double vhat = boost_velocity(lam, 0.0);
        const double c = std::cosh(2 * w);
        return std::abs(c - 1.0 / std::sqrt(1.0 - vhat * vhat)) / c;
    });
}

double check_boost_composition(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        const double l1 = 0.6 + rng.uniform(), l2 = 0.6 + rng.uniform();
        double worst = 0;
        for (double v = -0.9; v <= 0.9; v += 0.3) {
            const double chained = boost_velocity(l1, boost_velocity(l2, v));
            const double direct = boost_velocity(l1 * l2, v);
            worst = std::max(worst, std::abs(chained - direct));
        }
        return worst;
    });
}

double check_cross_ratio(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        const double lam = 1.0 + rng.uniform();
        double v[4];
        for (double& x : v) x = 0.9 * rng.symmetric();
        if (std::abs(v[0] - v[3]) < 1e-3 || std::abs(v[1] - v[2]) < 1e-3) return 0.0;
        auto cr = [](double a, double b, double c, double d) {
            return ((a - c) * (b - d)) / ((a - d) * (b - c));
        };
        const double before = cr(v[0], v[1], v[2], v[3]);
        const double after = cr(boost_velocity(lam, v[0]), boost_velocity(lam, v[1]),
                                boost_velocity(lam, v[2]), boost_velocity(lam, v[3]));
        return std::abs(after - before) / std::max(1.0, std::abs(before));
    });
}

double check_projections(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        double worst = 0;
        std::array<double, 3> y{2 * rng.symmetric(), 2 * rng.symmetric(), 2 * rng.symmetric()};
        const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        const double y0 = (rng.uniform() < 0.5 ? -1 : 1) * std::sqrt(r2 + 1.0);
        BallPoint hp = hyperboloid_project(y0, y, 1.0);
        worst = std::max(worst, std::abs(hp.norm2() - (std::abs(y0) - 1.0) / (std::abs(y0) + 1.0)));
        // light cone lands on the boundary sphere
        if (r2 > 0) {
            BallPoint edge = hyperboloid_project(std::sqrt(r2), y, 0.0);
            worst = std::max(worst, std::abs(edge.norm2() - 1.0));
        }
        const double b = 1.0 + rng.uniform();
        std::array<double, 3> x{rng.symmetric(), rng.symmetric(), rng.symmetric()};
        double xr2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if (xr2 > 0.9 * b * b) {
            const double f = std::sqrt(0.9 * b * b / xr2);
            for (double& c : x) c *= f;
            xr2 = 0.9 * b * b;
        }
        const double x0 = (rng.uniform() < 0.5 ? -1 : 1) * std::sqrt(b * b - xr2);
        BallPoint sp = sphere_project(x0, x, b);
        worst = std::max(worst, std::abs(sp.norm2() - (b - std::abs(x0)) / (b + std::abs(x0))));
        return worst;
    });
}

double check_em_hand_fields(const SuiteConfig& cfg) {
    QuaternionField constant_b = [](const std::array<double, 4>& x) {
        return Quaternion{0.0, -x[2] / 2.0, x[1] / 2.0, 0.0};
    };
    QuaternionField linear_t = [](const std::array<double, 4>& x) {
        return Quaternion{0.0, x[0], 0.0, 0.0};
    };
    EMFields f1 = em_decompose(constant_b, {0.2, -0.3, 0.6, 1.1}, cfg.fd_step);
    EMFields f2 = em_decompose(linear_t, {0, 0, 0, 0}, cfg.fd_step);
    double worst = std::abs(f1.B[2] - 1.0);
    worst = std::max({worst, std::abs(f1.B[0]), std::abs(f1.B[1]), std::abs(f1.f)});
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(f1.E[i]));
    worst = std::max(worst, std::abs(f2.E[0] + 1.0));
    worst = std::max({worst, std::abs(f2.E[1]), std::abs(f2.E[2]), std::abs(f2.f)});
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(f2.B[i]));
    return worst;
}

double check_em_convergence(const SuiteConfig&) {
    QuaternionField smooth = [](const std::array<double, 4>& x) {
        return Quaternion{std::sin(x[0] + 2 * x[1]), std::exp(0.3 * x[2]) * std::cos(x[3]),
                          std::sin(x[1] * x[3]), std::cos(x[0]) * x[2]};
    };
    const std::array<double, 4> at{0.3, -0.4, 0.7, 0.2};
    EMFields fine = em_decompose(smooth, at, 1e-4);
    auto err = [&](double h) {
        EMFields g = em_decompose(smooth, at, h);
        double worst = std::abs(g.f - fine.f);
        for (int i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(g.E[i] - fine.E[i]));
            worst = std::max(worst, std::abs(g.B[i] - fine.B[i]));
        }
        return worst;
    };
    return std::abs(err(4e-3) / err(2e-3) - 4.0);
}

double check_polar(const SuiteConfig& cfg) {
    return max_over_trials(cfg, [](std::uint64_t ts) {
        Rng rng(ts);
        SL2C l = random_sl2c(rng);
        PolarDecomposition p = polar_decompose(l);
        double worst = std::max(0.0, 1.0 - p.lambda);
        C2Matrix mid = {{{p.lambda, 0.0}, {0.0, 1.0 / p.lambda}}};
        C2Matrix rec = c2_mul(p.rho.mat(), c2_mul(mid, p.tau.mat()));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(rec[i][j] - l(i, j)));
        return worst;
    });
}

// -------------------------------------------------------------------------
// harness self-checks
// -------------------------------------------------------------------------

double check_harness_determinism(const SuiteConfig& cfg) {
    SuiteConfig sub = cfg;
    sub.trials = std::min(cfg.trials, 10);
    sub.parallel = true;
    std::vector<CheckResult> par = run_suite("quat", sub);
    sub.parallel = false;
    std::vector<CheckResult> ser = run_suite("quat", sub);
    sub.parallel = true;
    std::vector<CheckResult> par2 = run_suite("quat", sub);
    // serial and parallel agree bitwise; reruns agree byte-for-byte
    const std::string a = report_to_json(par, sub).at("checks").dump();
    const std::string b = report_to_json(ser, sub).at("checks").dump();
    const std::string c = report_to_json(par2, sub).at("checks").dump();
    return (a == b && a == c) ? 0.0 : 1.0;
}

double check_exit_codes(const SuiteConfig&) {
    std::vector<CheckResult> ok{{"x", "m", "pass", 0, 1, 1, 0, 0, ""}};
    std::vector<CheckResult> bad{{"x", "m", "pass", 0, 1, 1, 0, 0, ""},
                                 {"y", "m", "fail", 2, 1, 1, 0, 0, ""}};
    std::vector<CheckResult> err{{"z", "m", "error", 0, 1, 1, 0, 0, "boom"}};
    if (suite_exit_code(ok) != 0 || suite_exit_code(bad) != 1 || suite_exit_code(err) != 1)
        return 1.0;
    SuiteConfig invalid;
    invalid.fd_step = 1.0;
    try {
        invalid.validate();
        return 1.0; // must throw
    } catch (const ConfigError&) {
        return 0.0;
    }
}

std::vector<Check> build_registry() {
    auto fd2 = [](double factor) {
        return [factor](const SuiteConfig& cfg) { return factor * cfg.fd_step * cfg.fd_step; };
    };
    return {
        {"quat.norm_multiplicative_exact", "quat", tol(0.0), check_norm_mult_exact},
        {"quat.norm_multiplicative_double", "quat", tol(1e-14), check_norm_mult_double},
        {"quat.conj_antihomomorphism_exact", "quat", tol(0.0), check_conj_anti_exact},
        {"quat.conj_antihomomorphism_double", "quat", tol(1e-13), check_conj_anti_double},
        {"quat.m2c_homomorphism", "quat", tol(1e-13), check_m2c_homomorphism},
        {"quat.m2c_roundtrip", "quat", tol(0.0), check_m2c_roundtrip},
        {"quat.m2c_determinant", "quat", tol(1e-14), check_m2c_determinant},
        {"quat.ring_axioms_exact", "quat", tol(0.0), check_ring_axioms},
        {"quat.conj_is_jtranspose", "quat", tol(0.0), check_conj_is_jtranspose},
        {"quat.j_conjugate_involution", "quat", tol(0.0), check_j_involution},

        {"qmat.embed_homomorphism", "qmat", tol(1e-12), check_embed_homomorphism},
        {"qmat.inverse_residual", "qmat", tol(1e-10), check_embed_inverse},
        {"qmat.sp_closure", "qmat", tol(1e-10), check_sp_closure},
        {"qmat.skew_commutator_closure", "qmat", tol(0.0), check_skew_commutator},
        {"qmat.expm_unitarity", "qmat", tol(1e-11), check_expm_unitarity},
        {"qmat.expm_one_parameter", "qmat", tol(1e-10), check_expm_one_parameter},
        {"qmat.expm_block_diagonal", "qmat", tol(1e-13), check_expm_block_diag},
        {"qmat.random_determinism", "qmat", tol(0.0), check_random_determinism},

        {"grassmann.chart_identity", "grassmann", tol(1e-9), check_chart_identity},
        {"grassmann.lft_closed_forms", "grassmann", tol(1e-9), check_lft_closed_forms},
        {"grassmann.lft_group_axioms", "grassmann", tol(1e-9), check_lft_group_axioms},
        {"grassmann.lft_origin_image", "grassmann", tol(1e-10), check_lft_origin_image},
        {"grassmann.gram_eigenfloor", "grassmann", tol(1e-10), check_gram_eigenfloor},
        {"grassmann.metric_invariance", "grassmann", tol(1e-9), check_metric_invariance},
        {"grassmann.metric_w12_form", "grassmann", tol(1e-9), check_metric_w12},
        {"grassmann.pushforward_linearity", "grassmann", tol(1e-12), check_pushforward_linearity},
        {"grassmann.dimension_bookkeeping", "grassmann", tol(0.0), check_dimensions},

        {"forms.mc2_convergence", "forms", tol(0.5), check_mc2_convergence},
        {"forms.curvature_block_equality", "forms", tol(1.0), check_curvature_block_equality},
        {"forms.mc2_vs_blocks", "forms", fd2(1000.0), check_mc2_vs_blocks},
        {"forms.offdiag_mc_identity", "forms", tol(0.8), check_offdiag_mc},
        {"forms.w12_chart_identity", "forms", tol(1e-9), check_w12},
        {"forms.torsion_identity", "forms", tol(1e-9), check_torsion},
        {"forms.gauge_tensoriality", "forms", tol(1e-8), check_gauge_tensoriality},
        {"forms.twoform_structure", "forms", tol(1e-10), check_twoform_structure},
        {"forms.ricci_structure", "forms", tol(1e-11), check_ricci},
        {"forms.ym_specialization", "forms", tol(1e-9), check_ym_specialization},
        {"forms.hodge_duality", "forms", tol(0.0), check_hodge},
        {"forms.chern_antisymmetry", "forms", tol(1e-12), check_chern},

        {"liealg.commutator_table", "liealg", tol(0.0), check_commutator_table},
        {"liealg.index_maps", "liealg", tol(0.0), check_index_maps},
        {"liealg.generator_skewness", "liealg", tol(0.0), check_generator_skewness},
        {"liealg.weight_structure", "liealg", tol(0.0), check_weight_structure},
        {"liealg.generated_rank", "liealg", tol(0.0), check_generated_rank},
        {"liealg.negative_control", "liealg", tol(0.0), check_negative_control},

        {"lorentz.det_invariance", "lorentz", tol(1e-12), check_det_invariance},
        {"lorentz.so13_landing", "lorentz", tol(1e-10), check_so13},
        {"lorentz.boost_fixed_points", "lorentz", tol(0.0), check_boost_fixed_points},
        {"lorentz.boost_gamma_identity", "lorentz", tol(1e-12), check_boost_gamma},
        {"lorentz.boost_composition", "lorentz", tol(1e-12), check_boost_composition},
        {"lorentz.moebius_cross_ratio", "lorentz", tol(1e-12), check_cross_ratio},
        {"lorentz.ball_projections", "lorentz", tol(1e-12), check_projections},
        {"lorentz.em_hand_fields", "lorentz", tol(1e-8), check_em_hand_fields},
        {"lorentz.em_convergence", "lorentz", tol(0.5), check_em_convergence},
        {"lorentz.polar_reconstruction", "lorentz", tol(1e-10), check_polar},

        {"harness.determinism", "harness", tol(0.0), check_harness_determinism},
        {"harness.exit_codes", "harness", tol(0.0), check_exit_codes},
    };
}

} // namespace

const std::vector<Check>& check_registry() {
    static const std::vector<Check> kRegistry = build_registry();
    return kRegistry;
}

std::vector<std::string> registry_modules() {
    std::vector<std::string> mods;
    for (const Check& c : check_registry())
        if (std::find(mods.begin(), mods.end(), c.module) == mods.end()) mods.push_back(c.module);
    return mods;
}

std::vector<CheckResult> run_suite(const std::string& module_filter, const SuiteConfig& cfg) {
    cfg.validate();
    const auto mods = registry_modules();
    if (module_filter != "all" &&
        std::find(mods.begin(), mods.end(), module_filter) == mods.end())
        throw ConfigError("unknown module: " + module_filter);

    std::vector<CheckResult> results;
    for (const Check& c : check_registry()) {
        if (module_filter != "all" && c.module != module_filter) continue;
        CheckResult r;
        r.name = c.name;
        r.module = c.module;
        r.trials = cfg.trials;
        r.seed = cfg.seed;
        auto it = cfg.tolerances.find(c.name);
        r.tolerance = (it != cfg.tolerances.end()) ? it->second : c.tolerance(cfg);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.max_residual = c.run(cfg);
            r.status = (r.max_residual <= r.tolerance) ? "pass" : "fail";
        } catch (const std::exception& e) {
            r.status = "error";
            r.message = e.what();
        }
        r.duration_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    std::sort(results.begin(), results.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return results;
}

nlohmann::json report_to_json(const std::vector<CheckResult>& results, const SuiteConfig& cfg,
                              bool with_timings) {
    nlohmann::json checks = nlohmann::json::array();
    int pass = 0, fail = 0;
    for (const CheckResult& r : results) {
        nlohmann::json c{{"name", r.name},
                         {"module", r.module},
                         {"status", r.status},
                         {"max_residual", r.max_residual},
                         {"tolerance", r.tolerance},
                         {"trials", r.trials},
                         {"seed", r.seed}};
        if (with_timings) c["duration_ms"] = r.duration_ms;
        if (!r.message.empty()) c["message"] = r.message;
        checks.push_back(std::move(c));
        (r.status == "pass" ? pass : fail) += 1;
    }
    return nlohmann::json{{"version", 1},
                          {"config", cfg.to_json()},
                          {"checks", std::move(checks)},
                          {"summary", {{"pass", pass}, {"fail", fail}}}};
}

void emit_report(const std::vector<CheckResult>& results, const SuiteConfig& cfg,
                 const std::string& path, bool with_timings) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open report path for writing: " + path);
    out << report_to_json(results, cfg, with_timings).dump(2) << "\n";
    if (!out) throw ConfigError("failed while writing report: " + path);
}

int suite_exit_code(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (r.status != "pass") return 1;
    return 0;
}

} // namespace flagcurv
