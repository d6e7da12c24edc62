// Command-line verification runner: executes the per-module property
// suites with configurable seeds, sizes and tolerances, and emits
// machine-readable residual reports.

#include "flagcurv/forms.hpp"
#include "flagcurv/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace flagcurv;

struct CliOptions {
    bool seed_set = false, trials_set = false, step_set = false;
    std::uint64_t seed = 0;
    int trials = 0;
    double fd_step = 0;
    bool serial = false;
    bool json = false;
    bool timings = false;
    std::string config_path;
    std::vector<std::string> tol_args;
};

SuiteConfig assemble_config(const CliOptions& cli) {
    SuiteConfig cfg;
    if (const char* env = std::getenv("FLAGCURV_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("FLAGCURV_SEED is not an unsigned integer");
        }
    }
    if (!cli.config_path.empty()) {
        std::ifstream in(cli.config_path);
        if (!in) throw ConfigError("cannot open config file: " + cli.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
        }
        const std::uint64_t env_seed = cfg.seed;
        const bool file_has_seed = j.contains("seed");
        cfg = SuiteConfig::from_json(j);
        if (!file_has_seed) cfg.seed = env_seed;
    }
    if (cli.seed_set) cfg.seed = cli.seed;
    if (cli.trials_set) cfg.trials = cli.trials;
    if (cli.step_set) cfg.fd_step = cli.fd_step;
    if (cli.serial) cfg.parallel = false;
    for (const std::string& entry : cli.tol_args) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--tol expects name=value, got: " + entry);
        try {
            cfg.tolerances[entry.substr(0, eq)] = std::stod(entry.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--tol value is not a number: " + entry);
        }
    }
    cfg.validate();
    return cfg;
}

void print_table(const std::vector<CheckResult>& results) {
    std::printf("%-38s %-6s %-12s %-10s %9s\n", "CHECK", "STATUS", "RESIDUAL", "TOL", "ms");
    for (const CheckResult& r : results) {
        std::printf("%-38s %-6s %-12.3g %-10.3g %9.1f\n", r.name.c_str(), r.status.c_str(),
                    r.max_residual, r.tolerance, r.duration_ms);
        if (!r.message.empty()) std::printf("    %s\n", r.message.c_str());
    }
    int pass = 0, fail = 0;
    for (const CheckResult& r : results) (r.status == "pass" ? pass : fail) += 1;
    std::printf("summary: %d pass, %d fail\n", pass, fail);
}

nlohmann::json quaternion_json(const Quaternion& q) {
    return nlohmann::json::array({q.x0, q.x1, q.x2, q.x3});
}

nlohmann::json qmatrix_json(const QMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(quaternion_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_curvature(int k, int n, const SuiteConfig& cfg, bool json) {
    SpElement g = random_sp(k + n, cfg.seed);
    BlockedGroupElement blk = BlockedGroupElement::split(g, k);
    GrassmannPoint y = blk.base_point();
    QMatrix u = random_tangent(k, n, salted(cfg.seed, 1));
    QMatrix v = random_tangent(k, n, salted(cfg.seed, 2));
    auto [o1, o2] = curvature_closed_form(blk, y, u, v);
    auto [r1, r2] = ricci_forms(y, u, v);
    if (json) {
        nlohmann::json out{{"k", k},
                           {"n", n},
                           {"seed", cfg.seed},
                           {"Y", qmatrix_json(y.Y())},
                           {"u", qmatrix_json(u)},
                           {"v", qmatrix_json(v)},
                           {"Omega1", qmatrix_json(o1.value)},
                           {"Omega2", qmatrix_json(o2.value)},
                           {"R1", quaternion_json(r1)},
                           {"R2", quaternion_json(r2)}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "seeded closed-form curvature at k=" << k << ", n=" << n
                  << ", seed=" << cfg.seed << "\n";
        std::cout << "Y =\n" << to_string(y.Y()) << "\n";
        std::cout << "Omega1(u,v) =\n" << to_string(o1.value) << "\n";
        std::cout << "Omega2(u,v) =\n" << to_string(o2.value) << "\n";
        std::cout << "R1 = " << to_string(r1) << "\n";
        std::cout << "R2 = " << to_string(r2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flagcurv: property verification for quaternionic flag-manifold geometry"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    CliOptions cli;
    app.add_option("--config", cli.config_path, "JSON config file with suite settings");
    app.add_option("--seed", cli.seed, "base random seed")->each([&](const std::string&) {
        cli.seed_set = true;
    });
    app.add_option("--trials", cli.trials, "trials per seeded check")
        ->each([&](const std::string&) { cli.trials_set = true; });
    app.add_option("--fd-step", cli.fd_step, "finite-difference step, in [1e-6, 1e-2]")
        ->each([&](const std::string&) { cli.step_set = true; });
    app.add_option("--tol", cli.tol_args, "tolerance override, name=value (repeatable)");
    app.add_flag("--serial", cli.serial, "run the serial reference path instead of OpenMP");
    app.add_flag("--json", cli.json, "emit JSON instead of a table");
    app.add_flag("--timings", cli.timings, "include duration_ms in JSON output");

    auto* verify = app.add_subcommand("verify", "run property checks for one module or all");
    std::string module = "all";
    verify->add_option("module", module, "module name or 'all'");

    auto* dims = app.add_subcommand("dims", "dimension bookkeeping for the (k, n) chart");
    int dk = 1, dn = 1;
    dims->add_option("k", dk, "subset size k")->required();
    dims->add_option("n", dn, "subset size n")->required();

    auto* curv = app.add_subcommand("curvature", "print seeded closed-form curvature values");
    int ck = 1, cn = 1;
    curv->add_option("--k", ck, "rows of the chart");
    curv->add_option("--n", cn, "columns of the chart");

    auto* report = app.add_subcommand("report", "run all checks and write a JSON report");
    std::string out_path;
    report->add_option("--out", out_path, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors map to 2, --help to 0
    }

    try {
        const SuiteConfig cfg = assemble_config(cli);

        if (dims->parsed()) {
            GrassmannDims d = dimensions(dk, dn);
            if (cli.json) {
                nlohmann::json j{{"k", dk},
                                 {"n", dn},
                                 {"dim_Y", d.dim_Y},
                                 {"dim_X", d.dim_X},
                                 {"dim_fiber", d.dim_fiber}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "dim_Y = " << d.dim_Y << "\ndim_X = " << d.dim_X
                          << "\ndim_fiber = " << d.dim_fiber << "\n";
            }
            return 0;
        }

        if (curv->parsed()) return run_curvature(ck, cn, cfg, cli.json);

        if (verify->parsed()) {
            std::vector<CheckResult> results = run_suite(module, cfg);
            if (cli.json)
                std::cout << report_to_json(results, cfg, cli.timings).dump(2) << "\n";
            else
                print_table(results);
            return suite_exit_code(results);
        }

        if (report->parsed()) {
            std::vector<CheckResult> results = run_suite("all", cfg);
            emit_report(results, cfg, out_path, cli.timings);
            print_table(results);
            std::cout << "report written to " << out_path << "\n";
            return suite_exit_code(results);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
