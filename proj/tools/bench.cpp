// Compares the OpenMP trial loops against the serial reference path on the
// heavier check modules and verifies that both produce identical reports.

#include "flagcurv/harness.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace flagcurv;

namespace {

double timed_run(const std::string& module, const SuiteConfig& cfg,
                 std::vector<CheckResult>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = run_suite(module, cfg);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    SuiteConfig cfg;
    cfg.trials = 200;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--trials") == 0 && i + 1 < argc)
            cfg.trials = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            cfg.seed = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::printf("usage: bench [--trials N] [--seed S]\n");
            return 2;
        }
    }

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths run serially\n");
#endif
    std::printf("trials per check = %d, seed = %llu\n\n", cfg.trials,
                static_cast<unsigned long long>(cfg.seed));
    std::printf("%-12s %12s %12s %9s %s\n", "MODULE", "serial s", "parallel s", "speedup",
                "identical");

    bool all_identical = true;
    double serial_total = 0, parallel_total = 0;
    for (const std::string module : {"quat", "qmat", "grassmann", "forms", "lorentz"}) {
        std::vector<CheckResult> serial_results, parallel_results;
        SuiteConfig serial_cfg = cfg;
        serial_cfg.parallel = false;
        const double ts = timed_run(module, serial_cfg, serial_results);
        SuiteConfig parallel_cfg = cfg;
        parallel_cfg.parallel = true;
        const double tp = timed_run(module, parallel_cfg, parallel_results);

        // the configs differ in the parallel flag, so compare the checks only
        const bool same = report_to_json(serial_results, cfg).at("checks").dump() ==
                          report_to_json(parallel_results, cfg).at("checks").dump();
        all_identical = all_identical && same;
        serial_total += ts;
        parallel_total += tp;
        std::printf("%-12s %12.3f %12.3f %8.2fx %s\n", module.c_str(), ts, tp, ts / tp,
                    same ? "yes" : "NO");
    }
    std::printf("%-12s %12.3f %12.3f %8.2fx\n", "total", serial_total, parallel_total,
                serial_total / parallel_total);
    if (!all_identical) {
        std::printf("FAIL: serial and parallel paths disagree\n");
        return 1;
    }
    return 0;
}
