#pragma once

#include "flagcurv/errors.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace flagcurv {

/// Knobs for one verification run. Validated before use; a bad config maps
/// to exit code 2.
struct SuiteConfig {
    std::uint64_t seed = 42;
    int trials = 100;
    int k_max = 2;
    int n_max = 3;
    int N_max = 4;
    double fd_step = 1e-3;
    bool parallel = true;
    std::map<std::string, double> tolerances; // check name -> override

    void validate() const;
    static SuiteConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct CheckResult {
    std::string name;
    std::string module;
    std::string status; // pass | fail | error
    double max_residual = 0.0;
    double tolerance = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    double duration_ms = 0.0;
    std::string message; // populated when status == error
};

/// One named property check. run() returns the max residual over its
/// trials; the suite compares it against the (possibly overridden)
/// tolerance. Tolerance may depend on the config (finite-difference scale).
struct Check {
    std::string name;
    std::string module;
    std::function<double(const SuiteConfig&)> tolerance;
    std::function<double(const SuiteConfig&)> run;
};

/// The full registry, one entry per documented module invariant (plus the
/// op-level properties worth running continuously).
const std::vector<Check>& check_registry();

/// Modules known to the registry.
std::vector<std::string> registry_modules();

/// Runs all checks of one module (or "all"). Results are sorted by check
/// name. Trial i of every check derives from seed + i, so results do not
/// depend on execution order; the parallel and serial paths agree bitwise.
std::vector<CheckResult> run_suite(const std::string& module_filter, const SuiteConfig& cfg);

/// Largest residual over `trials` independent trials; trial i uses
/// cfg.seed + i. OpenMP-parallel when cfg.parallel, serial reference loop
/// otherwise; both produce identical results.
double max_over_trials(const SuiteConfig& cfg,
                       const std::function<double(std::uint64_t trial_seed)>& trial);

/// Mixes a salt into a trial seed so one trial can draw several
/// independent objects.
std::uint64_t salted(std::uint64_t trial_seed, std::uint64_t salt);

nlohmann::json report_to_json(const std::vector<CheckResult>& results, const SuiteConfig& cfg,
                              bool with_timings = false);

/// Writes the JSON report; throws ConfigError with path context on I/O
/// failure.
void emit_report(const std::vector<CheckResult>& results, const SuiteConfig& cfg,
                 const std::string& path, bool with_timings = false);

/// 0 when every check passed, 1 otherwise.
int suite_exit_code(const std::vector<CheckResult>& results);

} // namespace flagcurv
