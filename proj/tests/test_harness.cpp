#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagcurv/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

using namespace flagcurv;

namespace {

SuiteConfig small_config() {
    SuiteConfig cfg;
    cfg.seed = 1;
    cfg.trials = 5;
    return cfg;
}

// Documented invariant -> registered check. One row per Invariants &
// Properties entry of each primary module; the registry must cover all of
// them (it may carry extra op-level checks on top).
const std::vector<std::pair<const char*, const char*>> kDocumentedInvariants = {
    {"norm multiplicativity, exact on rationals", "quat.norm_multiplicative_exact"},
    {"norm multiplicativity, 1e-14 relative in floats", "quat.norm_multiplicative_double"},
    {"det of M2C equals norm2", "quat.m2c_determinant"},
    {"associativity and distributivity", "quat.ring_axioms_exact"},
    {"q* = j'q'j in the M2C basis", "quat.conj_is_jtranspose"},

    {"embed is an injective algebra homomorphism", "qmat.embed_homomorphism"},
    {"SpElement closure under products", "qmat.sp_closure"},
    {"sp closure under commutators", "qmat.skew_commutator_closure"},
    {"expm of block-diagonal is block-diagonal", "qmat.expm_block_diagonal"},

    {"both closed forms of the action agree", "grassmann.lft_closed_forms"},
    {"group action axioms", "grassmann.lft_group_axioms"},
    {"1 + YY* >= 1", "grassmann.gram_eigenfloor"},
    {"metric invariance", "grassmann.metric_invariance"},
    {"pushforward linearity", "grassmann.pushforward_linearity"},

    {"MC2 second-order convergence", "forms.mc2_convergence"},
    {"algebraic block curvature equals the FD obstruction", "forms.curvature_block_equality"},
    {"full MC2 assembly vanishes blockwise", "forms.mc2_vs_blocks"},
    {"d(omega12) identity", "forms.offdiag_mc_identity"},
    {"A* dY D = -omega12 through the chart", "forms.w12_chart_identity"},
    {"two-form skewness and antisymmetry", "forms.twoform_structure"},
    {"YM curvature matches the closed form", "forms.ym_specialization"},

    {"commutator table vanishes exactly", "liealg.commutator_table"},
    {"dbar zeta = JJ rule", "liealg.index_maps"},
    {"generator skewness", "liealg.generator_skewness"},
    {"generated algebra rank", "liealg.generated_rank"},
    {"perturbed generator breaks a relation", "liealg.negative_control"},

    {"det invariance and null-cone preservation", "lorentz.det_invariance"},
    {"lands in SO(1,3), kills the sign", "lorentz.so13_landing"},
    {"Moebius cross-ratio preservation", "lorentz.moebius_cross_ratio"},
    {"projections land in the closed ball", "lorentz.ball_projections"},
    {"EM decomposition second-order convergence", "lorentz.em_convergence"},

    {"determinism across serial and parallel", "harness.determinism"},
    {"exit-code contract", "harness.exit_codes"},
};

} // namespace

TEST_CASE("registry covers every documented module invariant") {
    const auto& reg = check_registry();
    auto has = [&](const std::string& name) {
        return std::any_of(reg.begin(), reg.end(),
                           [&](const Check& c) { return c.name == name; });
    };
    for (const auto& [doc, name] : kDocumentedInvariants) {
        INFO(doc << " -> " << name);
        CHECK(has(name));
    }
    // and the registry spans exactly the primary modules
    std::vector<std::string> mods = registry_modules();
    std::sort(mods.begin(), mods.end());
    CHECK(mods == std::vector<std::string>{"forms", "grassmann", "harness", "liealg", "lorentz",
                                           "qmat", "quat"});
}

TEST_CASE("run_suite(quat): all pass, about ten checks") {
    SuiteConfig cfg = small_config();
    cfg.trials = 20;
    std::vector<CheckResult> results = run_suite("quat", cfg);
    CHECK(results.size() >= 8);
    CHECK(results.size() <= 12);
    for (const CheckResult& r : results) {
        INFO(r.name << " residual " << r.max_residual << " message " << r.message);
        CHECK(r.status == "pass");
    }
    // sorted by name
    CHECK(std::is_sorted(results.begin(), results.end(),
                         [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; }));
}

TEST_CASE("run_suite twice produces byte-identical JSON") {
    SuiteConfig cfg = small_config();
    std::string a = report_to_json(run_suite("qmat", cfg), cfg).dump();
    std::string b = report_to_json(run_suite("qmat", cfg), cfg).dump();
    CHECK(a == b);
}

TEST_CASE("serial and parallel paths agree bitwise") {
    SuiteConfig cfg = small_config();
    cfg.parallel = true;
    auto par = run_suite("grassmann", cfg);
    cfg.parallel = false;
    auto ser = run_suite("grassmann", cfg);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].name == ser[i].name);
        CHECK(par[i].max_residual == ser[i].max_residual);
        CHECK(par[i].status == ser[i].status);
    }
}

TEST_CASE("config validation") {
    SuiteConfig cfg = small_config();
    cfg.fd_step = 1e-1;
    CHECK_THROWS_AS(run_suite("quat", cfg), ConfigError);
    cfg = small_config();
    cfg.k_max = 3;
    cfg.n_max = 2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.N_max = 9;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(run_suite("nosuchmodule", small_config()), ConfigError);
}

TEST_CASE("tolerance overrides flip a passing check") {
    SuiteConfig cfg = small_config();
    cfg.tolerances["quat.ring_axioms_exact"] = -1.0; // residual 0 > -1
    auto results = run_suite("quat", cfg);
    bool found = false;
    for (const CheckResult& r : results)
        if (r.name == "quat.ring_axioms_exact") {
            found = true;
            CHECK(r.status == "fail");
            CHECK(r.tolerance == -1.0);
        }
    CHECK(found);
    CHECK(suite_exit_code(results) == 1);
}

TEST_CASE("report schema, round-trip and exit codes") {
    // empty result list: summary zeros, exit 0
    std::vector<CheckResult> empty;
    nlohmann::json j = report_to_json(empty, small_config());
    CHECK(j.at("version") == 1);
    CHECK(j.at("summary").at("pass") == 0);
    CHECK(j.at("summary").at("fail") == 0);
    CHECK(suite_exit_code(empty) == 0);

    SuiteConfig cfg = small_config();
    auto results = run_suite("quat", cfg);
    const std::string path = "harness_report_test.json";
    emit_report(results, cfg, path);

    std::ifstream in(path);
    REQUIRE(static_cast<bool>(in));
    nlohmann::json parsed;
    in >> parsed;
    CHECK(parsed.at("version") == 1);
    CHECK(parsed.at("checks").size() == results.size());
    // parse back into CheckResult and compare
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& c = parsed.at("checks").at(i);
        CHECK(c.at("name").get<std::string>() == results[i].name);
        CHECK(c.at("module").get<std::string>() == results[i].module);
        CHECK(c.at("status").get<std::string>() == results[i].status);
        CHECK(c.at("max_residual").get<double>() == results[i].max_residual);
        CHECK(c.at("tolerance").get<double>() == results[i].tolerance);
        CHECK(c.at("trials").get<int>() == results[i].trials);
        CHECK(c.at("seed").get<std::uint64_t>() == results[i].seed);
        CHECK_FALSE(c.contains("duration_ms")); // only with timings
    }
    const int pass = parsed.at("summary").at("pass").get<int>();
    const int fail = parsed.at("summary").at("fail").get<int>();
    CHECK(pass + fail == static_cast<int>(results.size()));
    std::remove(path.c_str());

    CHECK_THROWS_AS(emit_report(results, cfg, "/nonexistent-dir/report.json"), ConfigError);
}

TEST_CASE("emit_report with timings includes durations") {
    SuiteConfig cfg = small_config();
    auto results = run_suite("quat", cfg);
    nlohmann::json j = report_to_json(results, cfg, true);
    CHECK(j.at("checks").at(0).contains("duration_ms"));
}
