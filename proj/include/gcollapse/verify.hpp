#pragma once

// Acceptance checks. Each criterion bundles several numeric checks against
// independent oracles; a criterion passes when all of its checks do.

#include <string>
#include <vector>

namespace gcollapse::verify {

struct Check {
    std::string name;
    double measured = 0.0;
    double limit = 0.0;
    bool pass = false;
    bool informational = false;  // reported, not part of the verdict
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;
    bool pass() const;
};

struct VerifyOptions {
    // Relative perturbation applied to the first end-state rate in the race
    // criteria. Only for exercising the failure path.
    double rate_perturbation = 0.0;
    unsigned threads = 0;           // 0: hardware concurrency
    std::string scenario_dir;       // bundled scenarios for the determinism criterion
};

// Criterion ids of a suite: residual, born, gravity, sn or all. Throws
// ParseError for other names.
std::vector<int> suite_criteria(const std::string& suite);
std::vector<std::string> suite_names();

CriterionResult run_criterion(int id, const VerifyOptions& options);

// "PASS  7  title  (0.12 s)" followed by one indented line per check.
std::string format(const CriterionResult& result, bool with_checks = true);

}  // namespace gcollapse::verify
